#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dwlab/profile.hpp"
#include "dwlab/thermo.hpp"

namespace dwlab {

enum class InitialBase { step, smoothed_step, profile };
enum class ReferenceKind { automatic, constant, smoothed_step, profile };

struct Perturbation {
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;

  double operator()(double x) const;
};

/// Everything one experiment needs. Text form is flat `key = value` lines;
/// '#' starts a comment.
struct ExperimentConfig {
  LimitSpec limits{};
  double gamma = 2.0;
  double k = 1.0;

  InitialBase initial_base = InitialBase::step;
  Perturbation density_bump{};
  Perturbation momentum_bump{};

  double X = 60.0;
  double dx = 0.02;
  double L_y = 8.0;
  double dy = 0.02;
  double profile_L = 16.0;  // lower bound for the profile half-width

  double tau_end = 4.0;
  double tau_step = 0.1;

  ReferenceKind reference = ReferenceKind::automatic;
  double smoothing_radius = 1.0;

  int order = 2;
  double cfl = 0.45;

  double entropy_slack = 1.05;
  double dissipation_slack = 1.1;
  double ineq_tol_factor = 0.05;
  double fit_tau_min = 0.5;

  PressureLaw law() const { return PressureLaw(k, gamma); }
  ReferenceKind resolved_reference() const;
  std::vector<double> tau_schedule() const;
  void validate() const;
};

/// Names accepted by parse_config, in documentation order.
const std::vector<std::string>& config_keys();

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Applies one `key = value` assignment; unknown keys raise ConfigError.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void write_config(std::ostream& os, const ExperimentConfig& cfg);

std::string to_string(InitialBase b);
std::string to_string(ReferenceKind r);

}  // namespace dwlab
