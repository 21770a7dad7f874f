/// @file driver.hpp
/// @brief Single runs, refinement sweeps and the stability witness.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sdc/analysis.hpp"
#include "sdc/config.hpp"
#include "sdc/timestep.hpp"

namespace sdc {

/// One simulation of the manufactured problem described by `config`;
/// per-step CSV goes to `csv` when non-null.
RunResult simulate(const RunConfig& config, std::ostream* csv = nullptr);

struct RunSummary {
  RunResult result;
  std::string csv_path;
  std::size_t unknowns = 0;
};

/// simulate() plus the per-step CSV file in config.output_dir and a summary
/// line on `log`.
RunSummary cmd_run(const RunConfig& config, std::ostream& log);

enum class Vary { h, sigma };
const char* to_string(Vary v);

/// Level l means n = 2^l (vary h) or sigma = 2^-l (vary sigma); the other
/// parameter is taken from `base`. Needs at least two levels.
ConvergenceRecord convergence_study(const RunConfig& base, Vary vary, std::span<const int> levels,
                                    std::ostream* log = nullptr);

struct ConvergenceOutput {
  ConvergenceRecord record;
  std::string path;  // <output_dir>/table_<test>_<vary>.csv
};

ConvergenceOutput cmd_convergence(const RunConfig& base, Vary vary, std::span<const int> levels, std::ostream& log);

struct StabilityResult {
  double sigma = 0.0;
  int n = 0;
  int steps = 0;
  double norm_w0 = 0.0;
  double norm_w1 = 0.0;
  double max_norm = 0.0;  // max over 0 <= n <= N of ||w_h^n||_0bar
  bool bounded(double factor = 2.0) const { return max_norm <= factor * std::max(norm_w0, norm_w1); }
};

/// Zero forcing, homogeneous boundary data and random initial coefficients
/// (uniform in [-1, 1], boundary entries zeroed) marched to T with BDF2.
StabilityResult stability_run(const RunConfig& config, double sigma, int n, double T, std::uint64_t seed = 12345);

}  // namespace sdc
