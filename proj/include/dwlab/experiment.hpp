#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dwlab/config.hpp"
#include "dwlab/csv.hpp"
#include "dwlab/dynamics.hpp"
#include "dwlab/entropy.hpp"
#include "dwlab/scaling.hpp"

namespace dwlab {

/// Reference pair of an experiment together with the profile constants.
/// For distinct limits the profile is always solved, so theta is known even
/// when another reference is requested.
struct ReferenceSetup {
  ReferenceKind kind = ReferenceKind::constant;
  ReferencePair ref = ReferencePair::constant(1.0);
  std::shared_ptr<const SimilarityProfile> profile;
  double theta = 0.0;
  double mu = 0.0;
  double K = 0.0;
  double profile_L = 0.0;
};

/// Half-width >= cfg.profile_L whose nodes coincide with the scaled cell centres.
double aligned_profile_half_width(const ExperimentConfig& cfg);
ReferenceSetup prepare_reference(const ExperimentConfig& cfg);
PhysicalState initial_state(const ExperimentConfig& cfg, const ReferenceSetup& setup);

struct Simulation {
  std::vector<double> tau;
  std::vector<PhysicalState> snapshots;  // one per tau
  RunResult run;
  double mass_drift = 0.0;  // max relative |M(t) - M(0) - boundary inflow|
  double min_density = 0.0;
};

Simulation simulate(const ExperimentConfig& cfg, const ReferenceSetup& setup);

struct EntropyReport {
  std::vector<double> tau, E, D_alpha, Xi1, Xi2, Xi3, envelope, ineq_residual;

  std::string reference = "constant";
  double rho_minus = 1.0;
  double rho_plus = 1.0;
  double alpha = 1.0;
  double gamma = 2.0;
  double k = 1.0;
  double dx = 0.0;
  double dy = 0.0;
  double dtau = 0.0;
  double theta = 0.0;
  double mu = 0.0;
  double K = 0.0;
  double E0 = 0.0;
  bool same_limits = true;
  bool envelope_binding = true;
  double ineq_tolerance = 0.0;
  bool edge_flag = false;
  double max_edge_value = 0.0;
  double max_boundary_deviation = 0.0;
  double min_density = 0.0;
  double mass_drift = 0.0;
  double steps = 0.0;
  double fit_rate = 0.0;
  double fit_rms = 0.0;

  std::size_t size() const noexcept { return tau.size(); }
};

/// Field-for-field equality; NaN entries compare equal to NaN.
bool same_report(const EntropyReport& a, const EntropyReport& b);

CsvTable report_table(const EntropyReport& report);
EntropyReport report_from_table(const CsvTable& table);

/// Scaled fields and entropy series for the snapshots of a simulation.
EntropyReport diagnose(const ExperimentConfig& cfg, const ReferenceSetup& setup, const Simulation& sim,
                       std::vector<ScaledField>* scaled = nullptr);
EntropyReport run_experiment(const ExperimentConfig& cfg);

/// e^{-tau/2} E0 for coincident limits, otherwise
/// e^{-(1/2 - theta) tau + mu/2} (E0 + K / theta).
double theoretical_bound(double tau, double E0, double theta, double mu, double K, bool same_limits);

struct DecayRate {
  double rate = 0.0;
  double rms = 0.0;
  int samples = 0;
};

/// Least-squares slope of -log E against tau on [tau_min, tau_max].
DecayRate fit_decay_rate(const EntropyReport& report, double tau_min, double tau_max);

enum class CheckStatus { pass, fail, inconclusive };
std::string to_string(CheckStatus s);

struct EnvelopeCheck {
  bool pass = false;
  double worst_ratio = 0.0;  // max E / envelope
  double worst_tau = 0.0;
};

EnvelopeCheck envelope_check(const EntropyReport& report, double slack);

struct DissipationCheck {
  CheckStatus status = CheckStatus::inconclusive;
  double margin = 0.0;  // min over checked samples of slack * bound - tail
  double threshold_tau = 0.0;
  std::size_t checked = 0;
  std::vector<double> tail;  // trapezoid integral of D_alpha from tau_j to the last sample
};

/// Tail integral of D_alpha against e^{-tau/2} E0 (coincident limits) or the
/// envelope plus 2 K e^{-tau/2} for tau >= 2 log(2 mu / (1 - 2 theta)).
DissipationCheck dissipation_check(const EntropyReport& report, double theta, double mu, double K, double E0,
                                   double slack = 1.0);

struct InequalityAudit {
  double tolerance = 0.0;
  double max_residual = 0.0;
  double violation = 0.0;  // max(0, max residual)
  bool pass = false;
};

InequalityAudit inequality_audit(const EntropyReport& report);

}  // namespace dwlab
