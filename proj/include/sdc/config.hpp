/// @file config.hpp
/// @brief Run configuration: presets, flat key=value files and validation.

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sdc/forms.hpp"
#include "sdc/timestep.hpp"

namespace sdc {

enum class PressureKind { q1, q1q0 };

/// Validation failure naming the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::string test = "test1";
  PhysicalParams params;
  double k1 = 1.0;   // eigenvalue along x before rotation (k_max in the presets)
  double k2 = 1e-2;  // eigenvalue along y before rotation (k_min in the presets)
  double theta = 0.0;
  int n = 16;                    // cells per unit length; h = 1/n
  double sigma = 1.0 / 64.0;
  double T = 1.0;
  Scheme scheme = Scheme::bdf2;
  PressureKind pressure = PressureKind::q1;
  Starter starter = Starter::taylor;
  bool interface_consistency = true;
  int quadrature = 3;            // Gauss points per axis in each cell
  std::string output_dir = ".";

  /// Throws ConfigError for the first invalid field.
  void validate() const;
  HydraulicTensor tensor() const { return HydraulicTensor(k1, k2, theta); }
  TimeGrid grid() const { return TimeGrid::from_step(T, sigma); }
  AssemblyOptions assembly() const { return {quadrature, quadrature}; }

  /// key=value lines in a fixed order; parse(dump()) reproduces the config.
  std::string dump() const;
};

/// test1, test2, test3 or custom (custom starts from the test1 values).
RunConfig preset(const std::string& name);

/// Sets one key; throws ConfigError on unknown keys or unparsable values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads key=value lines ('#' starts a comment) on top of `base`. A `test`
/// key, if present, must come first and resets to that preset.
RunConfig parse_config(std::istream& in, RunConfig base = {});

const char* to_string(PressureKind p);

}  // namespace sdc
