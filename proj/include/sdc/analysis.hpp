/// @file analysis.hpp
/// @brief Discrete and quadrature norms, errors against exact fields,
/// pairwise convergence orders, the discrete inf-sup constant and tables.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdc/forms.hpp"
#include "sdc/mms.hpp"

namespace sdc {

enum class NormKind { bar0, nabla, Bnorm, L2 };

const char* to_string(NormKind kind);

/// sqrt(x^T G x) with the Gram matrix of `kind`. bar0, nabla and Bnorm take a
/// packed w vector (length n_w); L2 takes pressure coefficients. Throws
/// std::domain_error if the quadratic form is negative beyond rounding.
double norm(const SystemOperators& ops, std::span<const double> coeffs, NormKind kind);

struct FieldErrors {
  double w_bar0 = 0.0;  // sqrt(eta ||v_h - v||^2 + rho g S0 ||phi_h - phi||^2)
  double p_L2 = 0.0;
  double v_L2 = 0.0;
  double phi_L2 = 0.0;
};

/// Errors by quadrature of the pointwise difference, `points` Gauss points per
/// axis (default one above assembly). `w` has length n_w, `p` length n_p.
/// Empty reference fields count as zero.
FieldErrors error_vs_exact(const MixedSpace& space, const PhysicalParams& params,
                           std::span<const double> w, std::span<const double> p,
                           const VectorField& velocity, const ScalarField& pressure,
                           const ScalarField& head, double t, int points = 4);

/// ||(v, phi)||_0bar of continuous fields by quadrature on the mesh.
double field_norm_bar0(const Mesh& mesh, const PhysicalParams& params, const VectorField& velocity,
                       const ScalarField& head, double t, int points = 4);

/// log2(coarse / fine).
double conv_order(double coarse, double fine);
/// CO_i = log2(e_{i-1}/e_i) for consecutive entries; throws on fewer than
/// two entries or nonpositive errors.
std::vector<double> conv_order(std::span<const double> errors);

/// Smallest generalized singular value of the divergence form measured in the
/// velocity H1 seminorm and the pressure L2 norm on zero-mean pressures.
/// Dense; throws std::length_error when the free velocity count exceeds
/// `max_dense`.
double infsup_estimate(const MixedSpace& space, const SystemOperators& ops, const PhysicalParams& params,
                       std::size_t max_dense = 4000);

/// Same estimate for an arbitrary velocity element on the fluid cells with a
/// continuous Q1 pressure; ElementKind::Q1 gives the unstable equal-order pair.
double infsup_estimate(const Mesh& mesh, ElementKind velocity_element, bool enrich_pressure = false,
                       std::size_t max_dense = 4000);

struct ConvergenceRow {
  double param = 0.0;
  double norm_w_exact = 0.0;
  double norm_w_h = 0.0;
  double err_w = 0.0;
  double err_p = 0.0;
  double cpu_s = 0.0;
};

struct ConvergenceRecord {
  std::string test;
  std::string vary;  // "h" or "sigma"
  std::vector<ConvergenceRow> rows;

  std::vector<std::optional<double>> co_w() const;
  std::vector<std::optional<double>> co_p() const;
};

/// CSV with header `param,norm_w_exact,norm_w_h,err_w,CO_w,err_p,CO_p,cpu_s`.
/// Throws on an empty record or non-decreasing parameters.
std::string emit_table(const ConvergenceRecord& record);

}  // namespace sdc
