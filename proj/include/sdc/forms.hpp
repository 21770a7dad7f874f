/// @file forms.hpp
/// @brief Assembly of the coupled Stokes-Darcy operators.
///
/// Unknowns are packed as w = (v_x, v_y, phi) followed by the pressure and a
/// single Lagrange multiplier enforcing a zero-mean pressure:
///
///     [ v_x | v_y | phi | p | lambda ]
///
/// Matrix convention: entry (i, j) is the form evaluated with trial basis
/// function j and test basis function i.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sdc/fem.hpp"
#include "sdc/linalg.hpp"
#include "sdc/mesh.hpp"

namespace sdc {

struct PhysicalParams {
  double nu = 0.1;      // kinematic viscosity
  double eta = 1e-2;    // volumetric porosity
  double rho = 1e3;     // fluid density
  double g = 10.0;      // gravitational acceleration
  double S0 = 1e-3;     // specific mass storativity
  double alpha = 1.0;   // Beavers-Joseph-Saffman slip coefficient

  double rho_g() const { return rho * g; }
  /// Throws std::invalid_argument naming the first nonpositive field.
  void validate() const;
};

/// Constant SPD conductivity K = R(theta) diag(k1, k2) R(theta)^T.
class HydraulicTensor {
 public:
  HydraulicTensor(double k1, double k2, double theta = 0.0);

  double k1() const { return k1_; }
  double k2() const { return k2_; }
  double theta() const { return theta_; }
  double k_min() const { return k1_ < k2_ ? k1_ : k2_; }
  double k_max() const { return k1_ < k2_ ? k2_ : k1_; }
  const Mat2& matrix() const { return K_; }
  Vec2 apply(Vec2 v) const { return K_ * v; }
  /// d^T K d for a unit direction d.
  double along(Vec2 d) const;

 private:
  double k1_, k2_, theta_;
  Mat2 K_;
};

struct AssemblyOptions {
  int cell_points = 3;  // Gauss points per axis in each cell
  int edge_points = 3;  // Gauss points on each interface edge
};

/// The discrete spaces V_h = V_f^h x V_p^h and Q_h with the global layout.
class MixedSpace {
 public:
  MixedSpace(const Mesh& mesh, bool enrich_pressure = false);

  const Mesh& mesh() const { return *mesh_; }
  const DofMap& velocity() const { return velocity_; }
  const DofMap& head() const { return head_; }
  const PressureSpace& pressure() const { return pressure_; }

  std::size_t n_velocity() const { return velocity_.n_dofs(); }
  std::size_t n_head() const { return head_.n_dofs(); }
  std::size_t n_pressure() const { return pressure_.n_dofs(); }
  std::size_t n_w() const { return 2 * n_velocity() + n_head(); }
  std::size_t n_total() const { return n_w() + n_pressure() + 1; }

  std::size_t vx_offset() const { return 0; }
  std::size_t vy_offset() const { return n_velocity(); }
  std::size_t head_offset() const { return 2 * n_velocity(); }
  std::size_t pressure_offset() const { return n_w(); }
  std::size_t multiplier_index() const { return n_w() + n_pressure(); }

  /// Constrained entries of w on the exterior boundaries, ascending.
  std::vector<std::size_t> dirichlet_dofs() const;

 private:
  const Mesh* mesh_;
  DofMap velocity_;
  DofMap head_;
  PressureSpace pressure_;
};

/// Assembled matrices of the variational problem.
struct SystemOperators {
  CsrMatrix mass;         // (.,.)_0bar on w: eta on velocity, rho g S0 on head
  CsrMatrix stiffness;    // B: viscous + BJS interface + K-weighted head stiffness
  CsrMatrix divergence;   // b: rows pressure, columns w (velocity only)
  CsrMatrix interface;    // b_I: skew coupling of head and normal velocity on I
  std::vector<double> mean;  // integral of each pressure basis function
  CsrMatrix nabla_gram;   // (.,.)_nabla: eta nu H1-seminorm + rho g k_max head seminorm
  CsrMatrix pressure_mass;
};

CsrMatrix assemble_mass(const MixedSpace& space, const PhysicalParams& params,
                        const AssemblyOptions& opts = {});
CsrMatrix assemble_B(const MixedSpace& space, const PhysicalParams& params,
                     const HydraulicTensor& tensor, const AssemblyOptions& opts = {});
CsrMatrix assemble_b(const MixedSpace& space, const PhysicalParams& params,
                     const AssemblyOptions& opts = {});
/// Assembles the (phi, u.n_f) block once and places its negative transpose,
/// so the result is exactly skew-symmetric.
CsrMatrix assemble_bI(const MixedSpace& space, const PhysicalParams& params,
                      const AssemblyOptions& opts = {});
std::vector<double> assemble_pressure_mean(const MixedSpace& space, const AssemblyOptions& opts = {});
CsrMatrix assemble_nabla_gram(const MixedSpace& space, const PhysicalParams& params,
                              const HydraulicTensor& tensor, const AssemblyOptions& opts = {});
CsrMatrix assemble_pressure_mass(const MixedSpace& space, const AssemblyOptions& opts = {});

SystemOperators assemble_operators(const MixedSpace& space, const PhysicalParams& params,
                                   const HydraulicTensor& tensor, const AssemblyOptions& opts = {});

using VectorField = std::function<Vec2(Point, double)>;
using ScalarField = std::function<double(Point, double)>;

/// Pointwise defects of the interface conditions, used as extra interface
/// functionals when a manufactured solution does not satisfy them exactly.
struct InterfaceDefect {
  double normal_force = 0.0;       // rho g phi - p + nu n^T (grad v) n
  double tangential_stress = 0.0;  // nu tau^T (grad v) n + alpha/sqrt(tau K tau) v.tau
  double mass_flux = 0.0;          // n_p^T K grad phi - eta v.n_f
};

using InterfaceField = std::function<InterfaceDefect(Point, double)>;

struct LoadData {
  VectorField f;             // empty means zero
  ScalarField g0;            // empty means zero
  InterfaceField interface;  // empty means consistent interface conditions
};

/// F(z) = eta (f, u) + rho g (g0, psi), plus the interface defect functionals.
/// Returns a vector of length n_w.
std::vector<double> assemble_load(const MixedSpace& space, const PhysicalParams& params,
                                  const LoadData& data, double t, const AssemblyOptions& opts = {});

/// Rows and columns of the constrained unknowns are replaced by the identity;
/// the known values are moved to the right-hand side, so a symmetric matrix
/// stays symmetric.
struct ConstrainedSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
};

ConstrainedSystem apply_dirichlet(const CsrMatrix& K, std::span<const double> rhs,
                                  std::span<const std::size_t> dofs,
                                  std::span<const double> values);

/// Dirichlet data on the exterior boundaries of both subdomains.
class DirichletConstraints {
 public:
  explicit DirichletConstraints(const MixedSpace& space);

  const std::vector<std::size_t>& dofs() const { return dofs_; }

  /// Nodal values of the traces at time t, in dofs() order. Empty fields give
  /// homogeneous data.
  std::vector<double> values(const VectorField& velocity, const ScalarField& head, double t) const;

  /// Constrained copy of a system matrix (time independent).
  CsrMatrix constrain_matrix(const CsrMatrix& K) const;
  /// rhs <- rhs - K[:, d] g on free rows, rhs[d] = g; K is the unconstrained matrix.
  void constrain_rhs(const CsrMatrix& K, std::span<double> rhs, std::span<const double> values) const;
  /// Overwrite the constrained entries of a coefficient vector.
  void impose(std::span<double> x, std::span<const double> values) const;

 private:
  const MixedSpace* space_;
  std::vector<std::size_t> dofs_;
  std::vector<bool> constrained_;
};

}  // namespace sdc
