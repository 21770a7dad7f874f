/// @file mms.hpp
/// @brief Closed-form manufactured solution on the two-square geometry,
/// its derivatives, the forcing it implies and the interface defects.
///
///   v1  = (x^2 (y-1)^2 + y) cos t
///   v2  = ((2/3) x (1-y)^3 + 2 - pi sin(pi x)) cos t
///   p   = (2 - pi sin(pi x)) sin(pi y / 2) cos t
///   phi = (2 - pi sin(pi x)) (1 - y - cos(pi y)) cos t
///
/// The fields do not satisfy the homogeneous equations, so f and g0 are
/// derived from the residuals: f = v_t - nu Lap v + grad p and
/// g0 = S0 phi_t - div(K grad phi).

#pragma once

#include "sdc/fem.hpp"
#include "sdc/forms.hpp"

namespace sdc {

enum class Field { velocity, pressure, head };

namespace mms {

/// d^k/dt^k cos t.
double time_factor(double t, int k = 0);

/// Spatial parts (the cos t factor stripped).
Vec2 velocity_profile(Point x);
Mat2 velocity_gradient_profile(Point x);  // [[dv1/dx, dv1/dy], [dv2/dx, dv2/dy]]
Vec2 velocity_laplacian_profile(Point x);
double pressure_profile(Point x);
Vec2 pressure_gradient_profile(Point x);
double head_profile(Point x);
Vec2 head_gradient_profile(Point x);
Mat2 head_hessian_profile(Point x);

/// Full fields; `k` selects the k-th time derivative.
Vec2 velocity(Point x, double t, int k = 0);
Mat2 velocity_gradient(Point x, double t);
Vec2 velocity_laplacian(Point x, double t);
double pressure(Point x, double t, int k = 0);
Vec2 pressure_gradient(Point x, double t);
double head(Point x, double t, int k = 0);
Vec2 head_gradient(Point x, double t);
Mat2 head_hessian(Point x, double t);
/// div(K grad phi) for a constant tensor.
double head_flux_divergence(Point x, double t, const HydraulicTensor& K);

/// Pointwise check of the owning subdomain of the default geometry.
bool in_subdomain(Point x, Subdomain s, double tol = 1e-12);

struct Forcing {
  Vec2 f;
  double g0 = 0.0;
};

/// f is evaluated only on the fluid side and g0 only on the porous side; the
/// other entry is left zero.
Forcing eval_forcing(Point x, double t, const PhysicalParams& params, const HydraulicTensor& K);

/// Defects of the interface conditions at a point of y = 1.
InterfaceDefect interface_defect(Point x, double t, const PhysicalParams& params,
                                 const HydraulicTensor& K);

struct InterfaceResiduals {
  double mass = 0.0;   // || eta v.n_f - n_p.K grad phi ||_{L2(I)}
  double force = 0.0;  // || rho g phi - p + nu n_f.(grad v) n_f ||
  double bjs = 0.0;    // || nu tau.(grad v) n_f + alpha/sqrt(tau K tau) v.tau ||
};

InterfaceResiduals interface_residuals(const HydraulicTensor& K, const PhysicalParams& params, double t);

}  // namespace mms

/// Value of an exact field (velocity returns both components, scalars use x).
/// Throws std::domain_error when the point lies outside the field's subdomain.
Vec2 eval_exact(Field field, Point x, double t);

/// Everything the time integrator needs to know about a problem instance.
/// Empty callables mean zero.
struct ProblemData {
  VectorField velocity;  // exact velocity: initial data, boundary trace and error reference
  ScalarField pressure;
  ScalarField head;
  // derivative data for the Taylor starter
  VectorField velocity_laplacian;
  VectorField pressure_gradient;
  ScalarField head_flux_divergence;  // div(K grad phi)
  LoadData load;
  bool exact_known = false;
};

/// The manufactured solution with its derived forcing. With
/// `interface_consistency` the interface defects enter the load.
ProblemData manufactured_problem(const PhysicalParams& params, const HydraulicTensor& K,
                                 bool interface_consistency);

/// Zero forcing, homogeneous boundary data, no exact solution.
ProblemData homogeneous_problem();

}  // namespace sdc
