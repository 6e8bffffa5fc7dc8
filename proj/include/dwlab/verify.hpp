#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dwlab/experiment.hpp"

namespace dwlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Exact smooth solution u = a(t) x, rho = rho(t) of the damped system with
/// a(0) = a0, written in scaling variables: rho(tau, y), n(tau, y).
AnalyticField linear_velocity_solution(double alpha, double a0, double rho0);

/// "criterion <id> PASS|FAIL <title>: <detail>"
std::string format_result(const CriterionResult& r);

struct AcceptanceOptions {
  std::size_t samples = 100000;  // per randomized property
  std::uint64_t seed = 20241014;
};

/// Experiment configurations used by the acceptance runs: 1 (coincident
/// limits with a density bump), 3 (jump 1.05 / 0.95 from a Riemann step),
/// 11 (constant state). `coarsen` multiplies dx, dy and tau_step.
ExperimentConfig acceptance_config(int run, double coarsen = 1.0);

/// Acceptance criteria 1-11. Experiment runs are shared between criteria
/// and computed on first use.
class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(AcceptanceOptions options = {});

  static const std::vector<int>& ids();
  CriterionResult run(int id);
  std::vector<CriterionResult> run_all();

  const EntropyReport& report(int run, double coarsen = 1.0);

 private:
  CriterionResult coincident_envelope();
  CriterionResult coincident_dissipation();
  CriterionResult jump_envelope();
  CriterionResult jump_dissipation();
  CriterionResult profile_suite();
  CriterionResult algebraic_identities();
  CriterionResult inequality_suite();
  CriterionResult entropy_identity();
  CriterionResult solver_audits();
  CriterionResult discrete_inequality();
  CriterionResult weak_strong();

  AcceptanceOptions options_;
  std::map<std::pair<int, double>, EntropyReport> reports_;
};

}  // namespace dwlab
