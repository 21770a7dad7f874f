/// @file oracle.hpp
/// @brief Brute-force reference assembly for tiny meshes.
///
/// Basis functions are rebuilt from nodal coordinates with 1D Lagrange
/// polynomials on each axis-aligned cell, and every matrix entry is a
/// separate quadrature sum. Nothing from the library's reference elements,
/// dof maps or quadrature tables is reused; only the support point of each
/// library unknown is read to line the two numberings up.

#pragma once

#include <cstddef>
#include <vector>

#include "sdc/forms.hpp"

namespace sdc::oracle {

enum class Field { vx, vy, head, pressure };

struct Unknown {
  Field field;
  Point at;
};

/// Exact integrals of products of the global nodal basis functions.
class Oracle {
 public:
  /// Rebuilds the n x n cell grids of both subdomains of `geometry`.
  Oracle(const Geometry& geometry, int n, const PhysicalParams& params, const HydraulicTensor& tensor);

  double mass(const Unknown& a, const Unknown& b) const;
  double stiffness(const Unknown& a, const Unknown& b) const;  // viscous + BJS + head
  double divergence(const Unknown& q, const Unknown& u) const; // -eta (q, div u)
  double interface(const Unknown& a, const Unknown& b) const;  // skew coupling
  double nabla_gram(const Unknown& a, const Unknown& b) const;
  double pressure_mean(const Unknown& q) const;

 private:
  struct Box {
    double x0, x1, y0, y1;
  };
  double basis(const Unknown& u, const Box& c, double x, double y, double* dx, double* dy) const;
  const std::vector<Box>& cells_of(Field f) const;
  template <typename F>
  double integrate_cells(Field f, F&& integrand) const;
  template <typename F>
  double integrate_interface(F&& integrand) const;

  Geometry geometry_;
  PhysicalParams params_;
  HydraulicTensor tensor_;
  std::vector<Box> fluid_;
  std::vector<Box> porous_;
};

/// Unknowns of `space` in library order: w block then Q1 pressure block.
/// Throws std::invalid_argument for the enriched pressure space.
std::vector<Unknown> w_unknowns(const MixedSpace& space);
std::vector<Unknown> pressure_unknowns(const MixedSpace& space);

struct Comparison {
  double max_abs_diff = 0.0;
  double max_abs_ref = 0.0;
  double relative() const { return max_abs_ref > 0.0 ? max_abs_diff / max_abs_ref : max_abs_diff; }
};

/// Largest deviation of every assembled operator from the oracle.
struct OperatorComparison {
  Comparison mass, stiffness, divergence, interface, nabla_gram, mean;
  double worst_relative() const;
};

OperatorComparison compare(const MixedSpace& space, const SystemOperators& ops, const PhysicalParams& params,
                           const HydraulicTensor& tensor);

}  // namespace sdc::oracle
