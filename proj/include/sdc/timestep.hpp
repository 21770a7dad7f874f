/// @file timestep.hpp
/// @brief Three-level BDF2-type marching, the Taylor starter and a backward
/// Euler reference scheme for the coupled system.
///
/// Each step solves
///
///   [ M + c (B + C_I)   c b^T   0 ] [ w      ]   [ rhs ]
///   [ b                 0       m ] [ p      ] = [ 0   ]
///   [ 0                 m^T     0 ] [ lambda ]   [ 0   ]
///
/// with c = 2 sigma / 3 (BDF2) or c = sigma (backward Euler). The matrix does
/// not depend on time and is factorized once.

#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdc/forms.hpp"
#include "sdc/linalg.hpp"
#include "sdc/mms.hpp"

namespace sdc {

struct TimeGrid {
  double T = 1.0;
  int N = 2;

  TimeGrid() = default;
  /// Throws std::invalid_argument unless T > 0 and N >= 1.
  TimeGrid(double T, int N);
  /// N = T / sigma, which must be an integer to 1e-9 relative.
  static TimeGrid from_step(double T, double sigma);

  double sigma() const { return T / N; }
  double t(int n) const { return n * sigma(); }
};

/// Coefficients of D(w)^{n+1} = (a0 w^{n+1} + a1 w^n + a2 w^{n-1}) / sigma.
struct Bdf2Weights {
  double current = 1.5;
  double previous = -2.0;
  double before = 0.5;
};

Bdf2Weights bdf2_weights();
double bdf2_derivative(double w_next, double w_now, double w_prev, double sigma);

enum class Scheme { bdf2, backward_euler };
enum class Starter { taylor, backward_euler };

const char* to_string(Scheme s);
const char* to_string(Starter s);

/// Error raised while marching; carries the failing step index.
class StepError : public std::runtime_error {
 public:
  StepError(int step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Factorized step matrix for a fixed weight c.
class StepSystem {
 public:
  StepSystem(const MixedSpace& space, const SystemOperators& ops, double weight);

  double weight() const { return weight_; }
  const CsrMatrix& matrix() const { return matrix_; }
  const DirichletConstraints& constraints() const { return bc_; }

  /// Full solution (w, p, lambda) for the w-row right-hand side `rhs_w` and
  /// Dirichlet values in constraints().dofs() order.
  std::vector<double> solve(std::span<const double> rhs_w, std::span<const double> dirichlet_values) const;
  /// ||A x - b|| / (1 + ||b||) of the last solve on the constrained system.
  double last_residual() const { return last_residual_; }

 private:
  const MixedSpace* space_;
  double weight_;
  DirichletConstraints bc_;
  CsrMatrix matrix_;
  CsrMatrix constrained_;
  std::unique_ptr<SparseLU> lu_;
  mutable double last_residual_ = 0.0;
};

/// Assembled block matrix before constraints.
CsrMatrix assemble_step_matrix(const MixedSpace& space, const SystemOperators& ops, double weight);

struct StepState {
  std::vector<double> w_prev;  // w^{n-1}
  std::vector<double> w;       // w^n
  std::vector<double> p;       // p^n
  int n = 0;
};

/// L2 projection in (.,.)_0bar onto V_h with the constrained entries set to
/// the given Dirichlet values.
std::vector<double> project(const MixedSpace& space, const PhysicalParams& params, const SystemOperators& ops,
                            const VectorField& velocity, const ScalarField& head, double t,
                            std::span<const double> dirichlet_values, const AssemblyOptions& opts = {});

/// Second-order Taylor predictor w0 + sigma w_t(0) with w_t taken from the
/// equations: v_t = nu Lap v - grad p + f, phi_t = (div(K grad phi) + g0) / S0.
struct Predictor {
  VectorField velocity;
  ScalarField head;
};
Predictor taylor_predictor(const ProblemData& data, const PhysicalParams& params, double sigma);

/// Pieces shared by the steps of one run.
struct StepContext {
  const MixedSpace* space;
  const SystemOperators* ops;
  const PhysicalParams* params;
  const ProblemData* data;
  AssemblyOptions assembly;
};

/// (w^1, p^1) from w^0: projected Taylor predictor or one backward Euler step.
/// The pressure always comes from a backward Euler solve at t_1.
StepState first_step(const StepContext& ctx, const StepSystem& euler, std::span<const double> w0,
                     double sigma, Starter starter);

/// One BDF2 step from levels n-1, n to n+1.
StepState bdf2_step(const StepContext& ctx, const StepSystem& bdf2, const StepState& state, double sigma,
                    int max_steps);

/// One backward Euler step from level n to n+1.
StepState backward_euler_step(const StepContext& ctx, const StepSystem& euler, const StepState& state,
                              double sigma, int max_steps);

/// ||b v - m (m.b v)/(m.m)||: the part of the divergence residual seen by
/// zero-mean pressures.
double divergence_residual(const SystemOperators& ops, std::span<const double> w);

struct StepDiagnostics {
  int n = 0;
  double t = 0.0;
  double err_w = 0.0;
  double err_p = 0.0;
  double div_residual = 0.0;
  double norm_w = 0.0;        // ||w_h^n||_0bar
  double norm_w_exact = 0.0;  // ||w(t_n)||_0bar
  double solve_residual = 0.0;
};

struct RunOptions {
  Scheme scheme = Scheme::bdf2;
  Starter starter = Starter::taylor;
  TimeGrid grid;
  AssemblyOptions assembly;
  bool compute_errors = true;
  /// Per-step CSV `n,t,err_w_bar0,err_p_L2,div_residual` when non-null.
  std::ostream* csv = nullptr;
};

struct RunResult {
  std::vector<StepDiagnostics> steps;  // n = 0..N
  double max_err_w = 0.0;              // max over 1 <= n <= N
  double max_err_p = 0.0;
  double max_norm_w = 0.0;
  double max_norm_w_exact = 0.0;
  double max_div_residual = 0.0;
  double max_solve_residual = 0.0;
  double march_seconds = 0.0;
  std::vector<double> w_final;
  std::vector<double> p_final;
};

/// w^0 is the projection of the data at t = 0 unless `initial_w` is given.
RunResult run(const MixedSpace& space, const PhysicalParams& params, const HydraulicTensor& tensor,
              const ProblemData& data, const RunOptions& options,
              std::optional<std::vector<double>> initial_w = std::nullopt);

}  // namespace sdc
