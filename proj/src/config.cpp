#include "dwlab/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dwlab/csv.hpp"
#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double number(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const ConfigError&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  }
}

int integer(const std::string& key, const std::string& v) {
  const double d = number(key, v);
  if (d != std::floor(d)) throw ConfigError("key '" + key + "' expects an integer");
  return static_cast<int>(d);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct Entry {
  std::string key;
  Setter set;
  Getter get;
};

Entry real(const std::string& key, double ExperimentConfig::*field) {
  return {key, [field](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*field = number(k, v); },
          [field](const ExperimentConfig& c) { return format_double(c.*field); }};
}

template <class F>
Entry real_via(const std::string& key, F access) {
  return {key, [access](ExperimentConfig& c, const std::string& k, const std::string& v) { access(c) = number(k, v); },
          [access](const ExperimentConfig& c) {
            ExperimentConfig copy = c;
            return format_double(access(copy));
          }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      real_via("rho_minus", [](ExperimentConfig& c) -> double& { return c.limits.rho_minus; }),
      real_via("rho_plus", [](ExperimentConfig& c) -> double& { return c.limits.rho_plus; }),
      real_via("alpha", [](ExperimentConfig& c) -> double& { return c.limits.alpha; }),
      real("gamma", &ExperimentConfig::gamma),
      real("k", &ExperimentConfig::k),
      {"initial_base",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         if (v == "step") c.initial_base = InitialBase::step;
         else if (v == "smoothed-step") c.initial_base = InitialBase::smoothed_step;
         else if (v == "profile") c.initial_base = InitialBase::profile;
         else throw ConfigError("initial_base must be step, smoothed-step or profile");
       },
       [](const ExperimentConfig& c) { return to_string(c.initial_base); }},
      real_via("bump_amplitude", [](ExperimentConfig& c) -> double& { return c.density_bump.amplitude; }),
      real_via("bump_width", [](ExperimentConfig& c) -> double& { return c.density_bump.width; }),
      real_via("bump_center", [](ExperimentConfig& c) -> double& { return c.density_bump.center; }),
      real_via("momentum_amplitude", [](ExperimentConfig& c) -> double& { return c.momentum_bump.amplitude; }),
      real_via("momentum_width", [](ExperimentConfig& c) -> double& { return c.momentum_bump.width; }),
      real_via("momentum_center", [](ExperimentConfig& c) -> double& { return c.momentum_bump.center; }),
      real("X", &ExperimentConfig::X),
      real("dx", &ExperimentConfig::dx),
      real("L_y", &ExperimentConfig::L_y),
      real("dy", &ExperimentConfig::dy),
      real("profile_L", &ExperimentConfig::profile_L),
      real("tau_end", &ExperimentConfig::tau_end),
      real("tau_step", &ExperimentConfig::tau_step),
      {"reference",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         if (v == "auto") c.reference = ReferenceKind::automatic;
         else if (v == "constant") c.reference = ReferenceKind::constant;
         else if (v == "smoothed-step") c.reference = ReferenceKind::smoothed_step;
         else if (v == "profile") c.reference = ReferenceKind::profile;
         else throw ConfigError("reference must be auto, constant, smoothed-step or profile");
       },
       [](const ExperimentConfig& c) { return to_string(c.reference); }},
      real("smoothing_radius", &ExperimentConfig::smoothing_radius),
      {"order", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.order = integer(k, v); },
       [](const ExperimentConfig& c) { return std::to_string(c.order); }},
      real("cfl", &ExperimentConfig::cfl),
      real("entropy_slack", &ExperimentConfig::entropy_slack),
      real("dissipation_slack", &ExperimentConfig::dissipation_slack),
      real("ineq_tol_factor", &ExperimentConfig::ineq_tol_factor),
      real("fit_tau_min", &ExperimentConfig::fit_tau_min),
  };
  return table;
}

}  // namespace

double Perturbation::operator()(double x) const {
  if (amplitude == 0.0) return 0.0;
  const double s = (x - center) / width;
  return amplitude * std::exp(-s * s);
}

ReferenceKind ExperimentConfig::resolved_reference() const {
  if (reference != ReferenceKind::automatic) return reference;
  return limits.coincident() ? ReferenceKind::constant : ReferenceKind::profile;
}

std::vector<double> ExperimentConfig::tau_schedule() const {
  const double steps = tau_end / tau_step;
  const auto n = static_cast<long>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps)) {
    throw ConfigError("tau_end must be an integer multiple of tau_step");
  }
  std::vector<double> out;
  for (long j = 0; j <= n; ++j) out.push_back(static_cast<double>(j) * tau_step);
  return out;
}

void ExperimentConfig::validate() const {
  try {
    limits.validate();
    (void)law();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(dx > 0.0 && dy > 0.0 && X > 0.0 && L_y > 0.0)) throw ConfigError("grid sizes must be positive");
  if (!(tau_step > 0.0 && tau_end > 0.0)) throw ConfigError("tau schedule must be positive");
  if (!(density_bump.width > 0.0 && momentum_bump.width > 0.0)) throw ConfigError("bump widths must be positive");
  if (!(smoothing_radius > 0.0)) throw ConfigError("smoothing_radius must be positive");
  if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
  if (!(cfl > 0.0 && cfl <= 0.5)) throw ConfigError("cfl must lie in (0, 0.5]");
  if (L_y * std::exp(0.5 * tau_end) > X * (1.0 + 1e-12)) {
    throw ConfigError("X must be at least L_y exp(tau_end / 2)");
  }
  if (!limits.coincident() && initial_base == InitialBase::profile && !(limits.alpha > 0.0)) {
    throw ConfigError("profile initial data needs alpha > 0");
  }
  const ReferenceKind r = resolved_reference();
  if (r == ReferenceKind::constant && !limits.coincident()) {
    throw ConfigError("constant reference requires rho_minus = rho_plus");
  }
  (void)tau_schedule();
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : entries()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& e : entries()) {
    if (e.key == key) {
      e.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  return parse_config(is);
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  for (const auto& e : entries()) os << e.key << " = " << e.get(cfg) << '\n';
}

std::string to_string(InitialBase b) {
  switch (b) {
    case InitialBase::step: return "step";
    case InitialBase::smoothed_step: return "smoothed-step";
    case InitialBase::profile: return "profile";
  }
  return "step";
}

std::string to_string(ReferenceKind r) {
  switch (r) {
    case ReferenceKind::automatic: return "auto";
    case ReferenceKind::constant: return "constant";
    case ReferenceKind::smoothed_step: return "smoothed-step";
    case ReferenceKind::profile: return "profile";
  }
  return "auto";
}

}  // namespace dwlab
