#include "sdc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

namespace sdc {

const char* to_string(PressureKind p) { return p == PressureKind::q1 ? "q1" : "q1q0"; }

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  // accepts plain numbers and powers of two written as 2^-k
  if (v.rfind("2^", 0) == 0) {
    int e = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data() + 2, end, e);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "cannot parse '" + v + "'");
    return std::ldexp(1.0, e);
  }
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "cannot parse '" + v + "' as a number");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "cannot parse '" + v + "' as an integer");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  auto positive = [](const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive and finite");
  };
  positive("nu", params.nu);
  positive("eta", params.eta);
  positive("rho", params.rho);
  positive("g", params.g);
  positive("S0", params.S0);
  positive("alpha", params.alpha);
  positive("k1", k1);
  positive("k2", k2);
  if (!std::isfinite(theta)) throw ConfigError("theta", "must be finite");
  if (n < 1) throw ConfigError("n", "must be at least 1");
  positive("sigma", sigma);
  positive("T", T);
  try {
    const TimeGrid g = grid();
    if (scheme == Scheme::bdf2 && g.N < 2) throw ConfigError("sigma", "the three-level scheme needs T/sigma >= 2");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sigma", e.what());
  }
  if (quadrature < 1 || quadrature > 6) throw ConfigError("quadrature", "must be in [1, 6]");
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

std::string RunConfig::dump() const {
  std::ostringstream os;
  os << "test=" << test << '\n'
     << "nu=" << num(params.nu) << '\n'
     << "eta=" << num(params.eta) << '\n'
     << "rho=" << num(params.rho) << '\n'
     << "g=" << num(params.g) << '\n'
     << "S0=" << num(params.S0) << '\n'
     << "alpha=" << num(params.alpha) << '\n'
     << "k1=" << num(k1) << '\n'
     << "k2=" << num(k2) << '\n'
     << "theta=" << num(theta) << '\n'
     << "n=" << n << '\n'
     << "sigma=" << num(sigma) << '\n'
     << "T=" << num(T) << '\n'
     << "scheme=" << to_string(scheme) << '\n'
     << "pressure=" << to_string(pressure) << '\n'
     << "starter=" << to_string(starter) << '\n'
     << "interface_consistency=" << (interface_consistency ? "true" : "false") << '\n'
     << "quadrature=" << quadrature << '\n'
     << "output_dir=" << output_dir << '\n';
  return os.str();
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.params.nu = 0.1;
  c.params.g = 10.0;
  c.params.rho = 1e3;
  c.params.alpha = 1.0;
  c.k1 = 1.0;
  c.k2 = 1e-2;
  c.T = 1.0;
  if (name == "test1" || name == "custom") {
    c.params.S0 = 1e-3;
    c.params.eta = 1e-2;
  } else if (name == "test2") {
    c.params.S0 = 1e-7;
    c.params.eta = 1e-2;
  } else if (name == "test3") {
    c.params.S0 = 1e-10;
    c.params.eta = 1e-1;
  } else {
    throw ConfigError("test", "unknown preset '" + name + "' (test1, test2, test3, custom)");
  }
  c.test = name;
  return c;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "test") {
    const std::string out = c.output_dir;
    c = preset(v);
    c.output_dir = out;
  } else if (key == "nu") c.params.nu = parse_double(key, v);
  else if (key == "eta") c.params.eta = parse_double(key, v);
  else if (key == "rho") c.params.rho = parse_double(key, v);
  else if (key == "g") c.params.g = parse_double(key, v);
  else if (key == "S0") c.params.S0 = parse_double(key, v);
  else if (key == "alpha") c.params.alpha = parse_double(key, v);
  else if (key == "k1") c.k1 = parse_double(key, v);
  else if (key == "k2") c.k2 = parse_double(key, v);
  else if (key == "theta") c.theta = parse_double(key, v);
  else if (key == "n") c.n = parse_int(key, v);
  else if (key == "sigma") c.sigma = parse_double(key, v);
  else if (key == "T") c.T = parse_double(key, v);
  else if (key == "scheme") {
    if (v == "bdf2") c.scheme = Scheme::bdf2;
    else if (v == "backward-euler") c.scheme = Scheme::backward_euler;
    else throw ConfigError(key, "expected bdf2 or backward-euler");
  } else if (key == "pressure") {
    if (v == "q1") c.pressure = PressureKind::q1;
    else if (v == "q1q0") c.pressure = PressureKind::q1q0;
    else throw ConfigError(key, "expected q1 or q1q0");
  } else if (key == "starter") {
    if (v == "taylor") c.starter = Starter::taylor;
    else if (v == "backward-euler") c.starter = Starter::backward_euler;
    else throw ConfigError(key, "expected taylor or backward-euler");
  } else if (key == "interface_consistency") c.interface_consistency = parse_bool(key, v);
  else if (key == "quadrature") c.quadrature = parse_int(key, v);
  else if (key == "output_dir") c.output_dir = v;
  else throw ConfigError(key, "unknown key");
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key=value");
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

}  // namespace sdc
