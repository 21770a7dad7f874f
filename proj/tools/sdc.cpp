// sdc: command-line front end for the coupled Stokes-Darcy solver.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdc/checks.hpp"
#include "sdc/config.hpp"
#include "sdc/docs.hpp"
#include "sdc/driver.hpp"
#include "sdc/linalg.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_numerical = 2;

/// Flags shared by run and convergence. Values stay strings so they go
/// through the same parser as config files.
struct ConfigFlags {
  std::string test = "test1";
  std::string config_file;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App& app) {
    app.add_option("--test", test, "Preset: test1, test2, test3 or custom");
    app.add_option("--config", config_file, "key=value file applied on top of the preset");
    for (const char* key : {"nu", "eta", "rho", "g", "S0", "alpha", "k1", "k2", "theta", "n", "sigma", "T", "scheme",
                            "pressure", "starter", "interface_consistency", "quadrature", "output_dir"}) {
      std::string flag = std::string("--") + key;
      for (char& c : flag)
        if (c == '_') c = '-';
      app.add_option_function<std::string>(
          flag, [this, key](const std::string& v) { overrides[key] = v; }, std::string("Override ") + key);
    }
  }

  /// preset < config file < SDC_OUTPUT_DIR < flags
  sdc::RunConfig build(const std::map<std::string, std::string>& defaults = {}) const {
    sdc::RunConfig c = sdc::preset(test);
    for (const auto& [k, v] : defaults) sdc::apply_setting(c, k, v);
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw sdc::ConfigError("config", "cannot open '" + config_file + "'");
      c = sdc::parse_config(in, c);
    }
    if (const char* env = std::getenv("SDC_OUTPUT_DIR"); env && *env) c.output_dir = env;
    for (const auto& [k, v] : overrides) sdc::apply_setting(c, k, v);
    c.validate();
    return c;
  }
};

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const int a = std::stoi(item.substr(0, dots)), b = std::stoi(item.substr(dots + 2));
      for (int l = a; l <= b; ++l) out.push_back(l);
    } else if (!item.empty()) {
      out.push_back(std::stoi(item));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Stokes-Darcy finite element solver"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  bool print_config = false;
  auto* run = app.add_subcommand("run", "One simulation: per-step CSV plus a summary line");
  run_flags.attach(*run);
  run->add_flag("--print-config", print_config, "Print the resolved configuration and exit");

  ConfigFlags conv_flags;
  std::string vary = "h";
  std::string levels_text;
  auto* conv = app.add_subcommand("convergence", "Refinement sweep in h or sigma; writes table_<test>_<vary>.csv");
  conv_flags.attach(*conv);
  conv->add_option("--vary", vary, "h or sigma")->check(CLI::IsMember({"h", "sigma"}));
  conv->add_option("--levels", levels_text, "Exponents l (h = 2^-l or sigma = 2^-l), e.g. 2,3,4 or 2..5")
      ->required();

  bool fast = false;
  auto* check = app.add_subcommand("check", "Structural property suite");
  check->add_flag("--fast", fast, "Skip the long-horizon stability witness");

  std::string docs_out;
  bool measure = false;
  auto* docs = app.add_subcommand("docs", "Print the math-to-code index and errata");
  docs->add_option("-o,--output", docs_out, "Write to a file instead of stdout");
  docs->add_flag("--measure", measure, "Run the Test 1 h-sweep and quote the measured orders");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }

  try {
    if (*run) {
      const sdc::RunConfig c = run_flags.build();
      if (print_config) {
        std::cout << c.dump();
        return exit_ok;
      }
      const sdc::RunSummary s = sdc::cmd_run(c, std::cout);
      std::cout << "csv " << s.csv_path << "\n";
    } else if (*conv) {
      const sdc::Vary v = vary == "h" ? sdc::Vary::h : sdc::Vary::sigma;
      // the other parameter defaults to the table captions: sigma = 2^-6 or h = 2^-5
      const std::map<std::string, std::string> defaults =
          v == sdc::Vary::h ? std::map<std::string, std::string>{{"sigma", "2^-6"}}
                            : std::map<std::string, std::string>{{"n", "32"}};
      const sdc::RunConfig c = conv_flags.build(defaults);
      std::vector<int> levels;
      try {
        levels = parse_levels(levels_text);
      } catch (const std::exception&) {
        throw sdc::ConfigError("levels", "cannot parse '" + levels_text + "'");
      }
      const sdc::ConvergenceOutput out = sdc::cmd_convergence(c, v, levels, std::cerr);
      std::cout << sdc::emit_table(out.record) << "table " << out.path << "\n";
    } else if (*check) {
      sdc::CheckFixture f;
      f.include_stability = !fast;
      int failed = 0;
      const auto results = sdc::run_checks(f);
      for (const sdc::CheckResult& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        failed += !r.pass;
      }
      std::cout << results.size() - failed << "/" << results.size() << " properties hold\n";
      return failed ? exit_numerical : exit_ok;
    } else if (*docs) {
      std::optional<sdc::MeasuredOrders> m;
      if (measure) {
        sdc::RunConfig c = sdc::preset("test1");
        c.sigma = 1.0 / 64.0;
        const std::vector<int> levels{2, 3, 4, 5};
        const sdc::ConvergenceRecord rec = sdc::convergence_study(c, sdc::Vary::h, levels, &std::cerr);
        m = sdc::MeasuredOrders{{}, {}, sdc::to_string(c.starter)};
        for (const auto& o : rec.co_w())
          if (o) m->co_w.push_back(*o);
        for (const auto& o : rec.co_p())
          if (o) m->co_p.push_back(*o);
      }
      const std::string text = sdc::generate_index(m);
      if (docs_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(docs_out);
        if (!f) throw sdc::ConfigError("output", "cannot write '" + docs_out + "'");
        f << text;
      }
    }
  } catch (const sdc::ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << "\n";
    return exit_validation;
  } catch (const sdc::StepError& e) {
    std::cerr << "error: numerical failure at " << e.what() << "\n";
    return exit_numerical;
  } catch (const sdc::SingularMatrixError& e) {
    std::cerr << "error: numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid input: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_ok;
}
