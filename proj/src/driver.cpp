#include "sdc/driver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace sdc {

const char* to_string(Vary v) { return v == Vary::h ? "h" : "sigma"; }

namespace {

struct Setup {
  Mesh mesh;
  MixedSpace space;
  Setup(const RunConfig& c)
      : mesh(Mesh::build_structured(Geometry{}, c.n)), space(mesh, c.pressure == PressureKind::q1q0) {}
};

RunOptions options_for(const RunConfig& c) {
  RunOptions o;
  o.scheme = c.scheme;
  o.starter = c.starter;
  o.grid = c.grid();
  o.assembly = c.assembly();
  return o;
}

std::string sigma_label(double sigma) {
  const double l = -std::log2(sigma);
  char buf[40];
  if (std::abs(l - std::round(l)) < 1e-12)
    std::snprintf(buf, sizeof buf, "2m%d", static_cast<int>(std::round(l)));
  else
    std::snprintf(buf, sizeof buf, "%g", sigma);
  return buf;
}

}  // namespace

RunResult simulate(const RunConfig& config, std::ostream* csv) {
  config.validate();
  const Setup s(config);
  const HydraulicTensor K = config.tensor();
  const ProblemData data = manufactured_problem(config.params, K, config.interface_consistency);
  RunOptions o = options_for(config);
  o.csv = csv;
  return run(s.space, config.params, K, data, o);
}

RunSummary cmd_run(const RunConfig& config, std::ostream& log) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);
  RunSummary out;
  out.csv_path = (std::filesystem::path(config.output_dir) /
                  ("steps_" + config.test + "_n" + std::to_string(config.n) + "_s" + sigma_label(config.sigma) +
                   "_" + to_string(config.scheme) + ".csv"))
                     .string();
  std::ofstream csv(out.csv_path);
  if (!csv) throw std::runtime_error("cannot write " + out.csv_path);
  {
    const Setup s(config);
    out.unknowns = s.space.n_total();
  }
  out.result = simulate(config, &csv);
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "summary test=%s n=%d sigma=%.6g N=%d scheme=%s unknowns=%zu err_w=%.6e err_p=%.6e "
                "norm_w=%.6e norm_w_exact=%.6e div=%.3e seconds=%.3f\n",
                config.test.c_str(), config.n, config.sigma, config.grid().N, to_string(config.scheme), out.unknowns,
                out.result.max_err_w, out.result.max_err_p, out.result.max_norm_w, out.result.max_norm_w_exact,
                out.result.max_div_residual, out.result.march_seconds);
  log << buf;
  return out;
}

ConvergenceRecord convergence_study(const RunConfig& base, Vary vary, std::span<const int> levels, std::ostream* log) {
  if (levels.size() < 2) throw ConfigError("levels", "need at least two refinement levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw ConfigError("levels", "must be strictly increasing");
  ConvergenceRecord rec;
  rec.test = base.test;
  rec.vary = to_string(vary);
  for (int l : levels) {
    if (l < 0 || l > 12) throw ConfigError("levels", "level out of range [0, 12]");
    RunConfig c = base;
    if (vary == Vary::h)
      c.n = 1 << l;
    else
      c.sigma = std::ldexp(1.0, -l);
    const RunResult r = simulate(c, nullptr);
    ConvergenceRow row;
    row.param = std::ldexp(1.0, -l);
    row.norm_w_exact = r.max_norm_w_exact;
    row.norm_w_h = r.max_norm_w;
    row.err_w = r.max_err_w;
    row.err_p = r.max_err_p;
    row.cpu_s = r.march_seconds;
    rec.rows.push_back(row);
    if (log) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "level %d: n=%d sigma=%.6g err_w=%.6e err_p=%.6e (%.2fs)\n", l, c.n, c.sigma,
                    row.err_w, row.err_p, row.cpu_s);
      *log << buf << std::flush;
    }
  }
  return rec;
}

ConvergenceOutput cmd_convergence(const RunConfig& base, Vary vary, std::span<const int> levels, std::ostream& log) {
  base.validate();
  ConvergenceOutput out;
  out.record = convergence_study(base, vary, levels, &log);
  std::filesystem::create_directories(base.output_dir);
  out.path = (std::filesystem::path(base.output_dir) / ("table_" + base.test + "_" + to_string(vary) + ".csv")).string();
  std::ofstream f(out.path);
  if (!f) throw std::runtime_error("cannot write " + out.path);
  f << emit_table(out.record);
  return out;
}

StabilityResult stability_run(const RunConfig& config, double sigma, int n, double T, std::uint64_t seed) {
  RunConfig c = config;
  c.n = n;
  c.sigma = sigma;
  c.T = T;
  c.scheme = Scheme::bdf2;
  c.validate();
  const Setup s(c);
  const HydraulicTensor K = c.tensor();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> w0(s.space.n_w());
  for (double& x : w0) x = U(rng);
  for (std::size_t d : s.space.dirichlet_dofs()) w0[d] = 0.0;

  RunOptions o;
  o.scheme = Scheme::bdf2;
  o.starter = Starter::backward_euler;  // no derivative data for random initial values
  o.grid = c.grid();
  o.assembly = c.assembly();
  o.compute_errors = false;
  const ProblemData data = homogeneous_problem();
  const RunResult r = run(s.space, c.params, K, data, o, w0);

  StabilityResult out;
  out.sigma = sigma;
  out.n = n;
  out.steps = o.grid.N;
  out.norm_w0 = r.steps.at(0).norm_w;
  out.norm_w1 = r.steps.at(1).norm_w;
  for (const StepDiagnostics& d : r.steps) out.max_norm = std::max(out.max_norm, d.norm_w);
  return out;
}

}  // namespace sdc
