/// @file mesh.hpp
/// @brief Structured conforming quadrilateral mesh of the fluid/porous
/// two-subdomain geometry with an exactly shared horizontal interface.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sdc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double x0, x1, y0, y1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(Point p, double tol = 1e-12) const {
    return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
  }
};

enum class Subdomain : std::uint8_t { fluid, porous };

enum class EdgeTag : std::uint8_t { interior, exterior_fluid, exterior_porous, interface };

const char* to_string(Subdomain s);
const char* to_string(EdgeTag t);

/// Fluid rectangle stacked on top of the porous rectangle. The interface is
/// the horizontal segment y = interface_y; the fluid-side normal is (0,-1).
struct Geometry {
  Rect fluid{0.0, 1.0, 1.0, 2.0};
  Rect porous{0.0, 1.0, 0.0, 1.0};
  double interface_y = 1.0;

  static constexpr Point normal_fluid() { return {0.0, -1.0}; }
  static constexpr Point normal_porous() { return {0.0, 1.0}; }
  static constexpr Point tangent() { return {1.0, 0.0}; }

  /// Throws std::invalid_argument when the rectangles do not share the
  /// interface segment exactly or overlap.
  void validate() const;
};

struct Cell {
  /// Counter-clockwise, starting at the lower-left corner.
  std::array<std::size_t, 4> vertices;
  /// Local edge e joins vertices e and (e+1)%4: bottom, right, top, left.
  std::array<std::size_t, 4> edges;
  Subdomain subdomain;
};

inline constexpr std::ptrdiff_t no_cell = -1;

struct Edge {
  std::array<std::size_t, 2> vertices;
  /// Incident cells; the second is no_cell on the exterior boundary.
  std::array<std::ptrdiff_t, 2> cells{no_cell, no_cell};
  EdgeTag tag = EdgeTag::interior;
};

class Mesh {
 public:
  /// n cells per unit length in both directions; the interface row of
  /// vertices is shared by both subdomains.
  static Mesh build_structured(const Geometry& geometry, int n);

  const Geometry& geometry() const { return geometry_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int cells_per_unit() const { return n_; }

  /// Maximum cell diameter.
  double h() const { return h_; }

  std::size_t count(EdgeTag tag) const;
  std::size_t count(Subdomain s) const;

  /// Plain-text dump: `v x y` per vertex, `c i0 i1 i2 i3 tag` per cell.
  void write(std::ostream& os) const;

 private:
  Mesh() = default;

  Geometry geometry_;
  int n_ = 0;
  double h_ = 0.0;
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;

  friend std::vector<EdgeTag> classify_boundary(const Mesh& mesh);
};

/// Tag every edge from its incident cells. Called by build_structured; exposed
/// so the partition can be recomputed and checked independently.
std::vector<EdgeTag> classify_boundary(const Mesh& mesh);

}  // namespace sdc
