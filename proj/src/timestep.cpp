#include "sdc/timestep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sdc/analysis.hpp"

namespace sdc {

TimeGrid::TimeGrid(double T_, int N_) : T(T_), N(N_) {
  if (!(T_ > 0.0) || !std::isfinite(T_)) throw std::invalid_argument("time grid: T must be positive");
  if (N_ < 1) throw std::invalid_argument("time grid: N must be at least 1");
}

TimeGrid TimeGrid::from_step(double T, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("time grid: sigma must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("time grid: T must be positive");
  const double ratio = T / sigma;
  const double N = std::round(ratio);
  if (N < 1 || std::abs(ratio - N) > 1e-9 * ratio)
    throw std::invalid_argument("time grid: T / sigma must be an integer");
  return TimeGrid(T, static_cast<int>(N));
}

Bdf2Weights bdf2_weights() { return {}; }

double bdf2_derivative(double w_next, double w_now, double w_prev, double sigma) {
  const Bdf2Weights a = bdf2_weights();
  return (a.current * w_next + a.previous * w_now + a.before * w_prev) / sigma;
}

const char* to_string(Scheme s) { return s == Scheme::bdf2 ? "bdf2" : "backward-euler"; }
const char* to_string(Starter s) { return s == Starter::taylor ? "taylor" : "backward-euler"; }

CsrMatrix assemble_step_matrix(const MixedSpace& space, const SystemOperators& ops, double c) {
  const std::size_t nw = space.n_w();
  const std::size_t po = space.pressure_offset();
  const std::size_t lam = space.multiplier_index();
  std::vector<Triplet> t = ops.mass.triplets();
  for (const Triplet& e : ops.stiffness.triplets()) t.push_back({e.row, e.col, c * e.value});
  for (const Triplet& e : ops.interface.triplets()) t.push_back({e.row, e.col, c * e.value});
  for (const Triplet& e : ops.divergence.triplets()) {
    if (e.col >= nw) throw std::logic_error("divergence matrix wider than w");
    t.push_back({e.col, po + e.row, c * e.value});
    t.push_back({po + e.row, e.col, e.value});
  }
  for (std::size_t i = 0; i < ops.mean.size(); ++i) {
    t.push_back({po + i, lam, ops.mean[i]});
    t.push_back({lam, po + i, ops.mean[i]});
  }
  return CsrMatrix::from_triplets(space.n_total(), space.n_total(), std::move(t));
}

StepSystem::StepSystem(const MixedSpace& space, const SystemOperators& ops, double weight)
    : space_(&space), weight_(weight), bc_(space) {
  if (!(weight > 0.0)) throw std::invalid_argument("step system: weight must be positive");
  matrix_ = assemble_step_matrix(space, ops, weight);
  constrained_ = bc_.constrain_matrix(matrix_);
  lu_ = std::make_unique<SparseLU>(constrained_);
}

std::vector<double> StepSystem::solve(std::span<const double> rhs_w,
                                      std::span<const double> dirichlet_values) const {
  if (rhs_w.size() != space_->n_w()) throw std::invalid_argument("step system: rhs length mismatch");
  if (dirichlet_values.size() != bc_.dofs().size())
    throw std::invalid_argument("step system: Dirichlet value count mismatch");
  std::vector<double> b(space_->n_total(), 0.0);
  std::copy(rhs_w.begin(), rhs_w.end(), b.begin());
  bc_.constrain_rhs(matrix_, b, dirichlet_values);

  std::vector<double> x = lu_->solve(b);
  const double bnorm = norm2(b);
  std::vector<double> r(b.size());
  // a couple of refinement sweeps absorb the scaling spread between blocks
  for (int sweep = 0;; ++sweep) {
    constrained_.multiply(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    last_residual_ = norm2(r) / (1.0 + bnorm);
    if (last_residual_ <= 1e-14 || sweep == 3) break;
    const std::vector<double> dx = lu_->solve(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  }
  return x;
}

std::vector<double> project(const MixedSpace& space, const PhysicalParams& params, const SystemOperators& ops,
                            const VectorField& velocity, const ScalarField& head, double t,
                            std::span<const double> dirichlet_values, const AssemblyOptions& opts) {
  LoadData source;
  source.f = velocity;
  if (head) source.g0 = [&head, S0 = params.S0](Point x, double s) { return S0 * head(x, s); };
  const std::vector<double> rhs = assemble_load(space, params, source, t, opts);
  const std::vector<std::size_t> dofs = space.dirichlet_dofs();
  const ConstrainedSystem sys = apply_dirichlet(ops.mass, rhs, dofs, dirichlet_values);
  return SparseLU(sys.matrix).solve(sys.rhs);
}

Predictor taylor_predictor(const ProblemData& data, const PhysicalParams& params, double sigma) {
  if (!data.velocity || !data.velocity_laplacian || !data.pressure_gradient)
    throw std::invalid_argument("first_step: missing derivative data for v0");
  if (!data.head || !data.head_flux_divergence)
    throw std::invalid_argument("first_step: missing derivative data for phi0");
  Predictor out;
  out.velocity = [data, params, sigma](Point x, double) {
    const Vec2 v = data.velocity(x, 0.0);
    const Vec2 lap = data.velocity_laplacian(x, 0.0);
    const Vec2 gp = data.pressure_gradient(x, 0.0);
    const Vec2 f = data.load.f ? data.load.f(x, 0.0) : Vec2{};
    return Vec2{v.x + sigma * (params.nu * lap.x - gp.x + f.x), v.y + sigma * (params.nu * lap.y - gp.y + f.y)};
  };
  out.head = [data, params, sigma](Point x, double) {
    const double g0 = data.load.g0 ? data.load.g0(x, 0.0) : 0.0;
    return data.head(x, 0.0) + sigma / params.S0 * (data.head_flux_divergence(x, 0.0) + g0);
  };
  return out;
}

namespace {

std::vector<double> dirichlet_at(const StepSystem& sys, const ProblemData& data, double t) {
  return sys.constraints().values(data.velocity, data.head, t);
}

StepState unpack(const MixedSpace& space, const std::vector<double>& x, int n) {
  StepState s;
  s.w.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(space.n_w()));
  s.p.assign(x.begin() + static_cast<std::ptrdiff_t>(space.pressure_offset()),
             x.begin() + static_cast<std::ptrdiff_t>(space.multiplier_index()));
  s.n = n;
  return s;
}

}  // namespace

StepState backward_euler_step(const StepContext& ctx, const StepSystem& euler, const StepState& state,
                              double sigma, int max_steps) {
  const int next = state.n + 1;
  if (next > max_steps) throw StepError(next, "step index exceeds N");
  const double t = next * sigma;
  std::vector<double> rhs = ctx.ops->mass * std::span<const double>(state.w);
  const std::vector<double> F = assemble_load(*ctx.space, *ctx.params, ctx.data->load, t, ctx.assembly);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += sigma * F[i];
  StepState out = unpack(*ctx.space, euler.solve(rhs, dirichlet_at(euler, *ctx.data, t)), next);
  out.w_prev = state.w;
  return out;
}

StepState bdf2_step(const StepContext& ctx, const StepSystem& bdf2, const StepState& state, double sigma,
                    int max_steps) {
  const int next = state.n + 1;
  if (next > max_steps) throw StepError(next, "step index exceeds N");
  if (state.w_prev.size() != state.w.size()) throw StepError(next, "BDF2 needs two previous levels");
  const double t = next * sigma;
  std::vector<double> combo(state.w.size());
  for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = (4.0 * state.w[i] - state.w_prev[i]) / 3.0;
  std::vector<double> rhs = ctx.ops->mass * std::span<const double>(combo);
  const std::vector<double> F = assemble_load(*ctx.space, *ctx.params, ctx.data->load, t, ctx.assembly);
  const double c = 2.0 * sigma / 3.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += c * F[i];
  StepState out = unpack(*ctx.space, bdf2.solve(rhs, dirichlet_at(bdf2, *ctx.data, t)), next);
  out.w_prev = state.w;
  return out;
}

StepState first_step(const StepContext& ctx, const StepSystem& euler, std::span<const double> w0,
                     double sigma, Starter starter) {
  StepState zero;
  zero.w.assign(w0.begin(), w0.end());
  zero.n = 0;
  StepState be = backward_euler_step(ctx, euler, zero, sigma, 1);
  if (starter == Starter::backward_euler) return be;

  const Predictor pred = taylor_predictor(*ctx.data, *ctx.params, sigma);
  StepState out;
  out.w = project(*ctx.space, *ctx.params, *ctx.ops, pred.velocity, pred.head, sigma,
                  dirichlet_at(euler, *ctx.data, sigma), ctx.assembly);
  out.p = std::move(be.p);
  out.w_prev = zero.w;
  out.n = 1;
  return out;
}

double divergence_residual(const SystemOperators& ops, std::span<const double> w) {
  std::vector<double> r = ops.divergence * w;
  const double mm = dot(ops.mean, ops.mean);
  if (mm > 0.0) {
    const double s = dot(ops.mean, r) / mm;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= s * ops.mean[i];
  }
  return norm2(r);
}

namespace {

StepDiagnostics diagnose(const StepContext& ctx, const RunOptions& opt, const StepState& s, double t,
                         double solve_residual) {
  StepDiagnostics d;
  d.n = s.n;
  d.t = t;
  d.div_residual = divergence_residual(*ctx.ops, s.w);
  d.norm_w = norm(*ctx.ops, s.w, NormKind::bar0);
  d.solve_residual = solve_residual;
  if (opt.compute_errors && ctx.data->exact_known) {
    const FieldErrors e = error_vs_exact(*ctx.space, *ctx.params, s.w, s.p, ctx.data->velocity,
                                         ctx.data->pressure, ctx.data->head, t, opt.assembly.cell_points + 1);
    d.err_w = e.w_bar0;
    d.err_p = e.p_L2;
    d.norm_w_exact = field_norm_bar0(ctx.space->mesh(), *ctx.params, ctx.data->velocity, ctx.data->head, t,
                                     opt.assembly.cell_points + 1);
  }
  if (!std::isfinite(d.err_w) || !std::isfinite(d.err_p) || !std::isfinite(d.norm_w))
    throw StepError(s.n, "non-finite solution");
  return d;
}

void write_row(std::ostream& os, const StepDiagnostics& d) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%.10e,%.10e,%.10e,%.10e\n", d.n, d.t, d.err_w, d.err_p, d.div_residual);
  os << buf;
}

}  // namespace

RunResult run(const MixedSpace& space, const PhysicalParams& params, const HydraulicTensor& tensor,
              const ProblemData& data, const RunOptions& opt, std::optional<std::vector<double>> initial_w) {
  params.validate();
  const TimeGrid& grid = opt.grid;
  if (opt.scheme == Scheme::bdf2 && grid.N < 2)
    throw std::invalid_argument("run: the three-level scheme needs N >= 2");
  const double sigma = grid.sigma();
  const SystemOperators ops = assemble_operators(space, params, tensor, opt.assembly);
  const StepContext ctx{&space, &ops, &params, &data, opt.assembly};

  const auto start = std::chrono::steady_clock::now();
  const StepSystem euler(space, ops, sigma);
  std::optional<StepSystem> bdf2;
  if (opt.scheme == Scheme::bdf2) bdf2.emplace(space, ops, 2.0 * sigma / 3.0);

  StepState state;
  if (initial_w) {
    if (initial_w->size() != space.n_w()) throw std::invalid_argument("run: initial vector length mismatch");
    state.w = std::move(*initial_w);
  } else {
    state.w = project(space, params, ops, data.velocity, data.head, 0.0,
                      euler.constraints().values(data.velocity, data.head, 0.0), opt.assembly);
  }
  state.p.assign(space.n_pressure(), 0.0);
  state.n = 0;

  RunResult result;
  if (opt.csv) *opt.csv << "n,t,err_w_bar0,err_p_L2,div_residual\n";
  // The projected starting levels are not discretely divergence free; only
  // solved levels enter the divergence maximum.
  auto record = [&](const StepState& s, double solve_residual, bool solved) {
    const StepDiagnostics d = diagnose(ctx, opt, s, grid.t(s.n), solve_residual);
    result.steps.push_back(d);
    if (s.n >= 1) {
      result.max_err_w = std::max(result.max_err_w, d.err_w);
      result.max_err_p = std::max(result.max_err_p, d.err_p);
      result.max_norm_w = std::max(result.max_norm_w, d.norm_w);
      result.max_norm_w_exact = std::max(result.max_norm_w_exact, d.norm_w_exact);
      if (solved) result.max_div_residual = std::max(result.max_div_residual, d.div_residual);
      result.max_solve_residual = std::max(result.max_solve_residual, d.solve_residual);
      if (opt.csv) write_row(*opt.csv, d);
    }
  };
  record(state, 0.0, false);

  int n = 1;
  try {
    if (opt.scheme == Scheme::bdf2) {
      state = first_step(ctx, euler, state.w, sigma, opt.starter);
      record(state, euler.last_residual(), opt.starter == Starter::backward_euler);
      for (n = 2; n <= grid.N; ++n) {
        state = bdf2_step(ctx, *bdf2, state, sigma, grid.N);
        record(state, bdf2->last_residual(), true);
      }
    } else {
      for (n = 1; n <= grid.N; ++n) {
        state = backward_euler_step(ctx, euler, state, sigma, grid.N);
        record(state, euler.last_residual(), true);
      }
    }
  } catch (const StepError&) {
    throw;
  } catch (const std::exception& e) {
    throw StepError(n, e.what());
  }
  result.march_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.w_final = std::move(state.w);
  result.p_final = std::move(state.p);
  return result;
}

}  // namespace sdc
