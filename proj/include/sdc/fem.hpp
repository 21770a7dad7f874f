/// @file fem.hpp
/// @brief Lagrange reference elements on [-1,1]^2, Gauss-Legendre rules,
/// the bilinear geometry map and degree-of-freedom numbering.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "sdc/mesh.hpp"

namespace sdc {

enum class ElementKind { Q0, Q1, Q2 };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Mat2 {
  // row-major: [[a, b], [c, d]]
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  double det() const { return a * d - b * c; }
  Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 transposed() const { return {a, c, b, d}; }
  Mat2 inverse() const {
    const double inv = 1.0 / det();
    return {d * inv, -b * inv, -c * inv, a * inv};
  }
};

/// Node ordering: Q1 uses the four corners counter-clockwise from (-1,-1).
/// Q2 uses the corners, then the midpoints of the bottom, right, top and left
/// edges, then the center.
class ReferenceElement {
 public:
  explicit ReferenceElement(ElementKind kind);

  ElementKind kind() const { return kind_; }
  std::size_t n_nodes() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }

  void values(Point ref, std::span<double> out) const;
  void gradients(Point ref, std::span<Vec2> out) const;

  std::vector<double> values(Point ref) const;
  std::vector<Vec2> gradients(Point ref) const;

  /// Local nodes lying on local edge e (0 bottom, 1 right, 2 top, 3 left).
  std::vector<std::size_t> edge_nodes(int e) const;

 private:
  ElementKind kind_;
  std::vector<Point> nodes_;
  // per node: 1D Lagrange index along xi and eta (Q1: 0..1, Q2: 0..2)
  std::vector<std::array<int, 2>> tensor_index_;
};

const ReferenceElement& reference_element(ElementKind kind);

struct QuadratureRule {
  int dim = 2;
  /// For segments only `x` is used.
  std::vector<Point> points;
  std::vector<double> weights;
  /// Per-axis polynomial degree integrated exactly.
  int exactness = 0;
};

/// Gauss-Legendre rule on [-1,1]; 1 <= points <= 6.
QuadratureRule gauss_segment(int points);
/// Tensor Gauss-Legendre rule on [-1,1]^2.
QuadratureRule gauss_square(int points_per_axis);

struct CellMapping {
  Point x;
  Mat2 jacobian;  // d(x,y)/d(xi,eta)
  double det = 0.0;
};

/// Bilinear isoparametric map of mesh cell `cell`. Throws std::domain_error on
/// a nonpositive Jacobian determinant.
CellMapping map_to_physical(const Mesh& mesh, std::size_t cell, Point ref);

/// Reference coordinates of the point at parameter s in [-1,1] along local
/// edge e, following the cell's counter-clockwise orientation.
Point edge_reference_point(int local_edge, double s);

enum class SpaceKind { velocity_x, velocity_y, head, pressure_q1, pressure_q0 };

const char* to_string(SpaceKind kind);

class DofMap {
 public:
  SpaceKind kind() const { return kind_; }
  ElementKind element() const { return element_; }
  Subdomain subdomain() const { return subdomain_; }
  std::size_t n_dofs() const { return support_.size(); }

  /// Empty for cells outside the owning subdomain.
  const std::vector<std::size_t>& cell_dofs(std::size_t cell) const { return cell_dofs_[cell]; }
  Point support_point(std::size_t dof) const { return support_[dof]; }
  const std::vector<Point>& support_points() const { return support_; }
  bool is_dirichlet(std::size_t dof) const { return dirichlet_[dof]; }
  std::vector<std::size_t> dirichlet_dofs() const;

 private:
  friend DofMap build_dofmap(const Mesh&, SpaceKind);
  friend DofMap build_dofmap(const Mesh&, Subdomain, ElementKind, SpaceKind);

  SpaceKind kind_ = SpaceKind::velocity_x;
  ElementKind element_ = ElementKind::Q2;
  Subdomain subdomain_ = Subdomain::fluid;
  std::vector<std::vector<std::size_t>> cell_dofs_;
  std::vector<Point> support_;
  std::vector<bool> dirichlet_;
};

/// Standard spaces: Q2 velocity components on the fluid cells, Q2 head on
/// the porous cells, Q1 or Q0 pressure on the fluid cells.
DofMap build_dofmap(const Mesh& mesh, SpaceKind kind);

/// Any element on any subdomain; `label` is reported by kind(). Continuous
/// spaces mark dofs on the subdomain's exterior (non-interface) boundary as
/// Dirichlet.
DofMap build_dofmap(const Mesh& mesh, Subdomain subdomain, ElementKind element, SpaceKind label);

/// Discrete pressure: continuous Q1, optionally enriched by cellwise
/// constants. With enrichment the constant of the first fluid cell is left
/// out so the basis stays linearly independent.
class PressureSpace {
 public:
  static constexpr std::size_t pinned = static_cast<std::size_t>(-1);

  PressureSpace(const Mesh& mesh, bool enrich_q0);

  bool enriched() const { return enriched_; }
  std::size_t n_dofs() const { return n_dofs_; }
  const DofMap& q1() const { return q1_; }

  /// Global indices of the basis functions supported on `cell`: the four Q1
  /// dofs followed (if enriched) by the cell constant, or `pinned`.
  const std::vector<std::size_t>& cell_dofs(std::size_t cell) const { return cell_dofs_[cell]; }
  /// Basis values matching cell_dofs order.
  void values(Point ref, std::span<double> out) const;
  std::size_t n_local() const { return enriched_ ? 5 : 4; }

 private:
  bool enriched_;
  DofMap q1_;
  std::size_t n_dofs_;
  std::vector<std::vector<std::size_t>> cell_dofs_;
};

}  // namespace sdc
