#include "dwlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_value(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_series(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_value(a[i], b[i])) return false;
  }
  return true;
}

const char* const kColumns[] = {"tau", "E", "D_alpha", "Xi1", "Xi2", "Xi3", "envelope", "ineq_residual"};

// Metadata fields carried in header comments.
struct Meta {
  const char* key;
  double EntropyReport::*field;
};

const Meta kMeta[] = {
    {"rho_minus", &EntropyReport::rho_minus},
    {"rho_plus", &EntropyReport::rho_plus},
    {"alpha", &EntropyReport::alpha},
    {"gamma", &EntropyReport::gamma},
    {"k", &EntropyReport::k},
    {"dx", &EntropyReport::dx},
    {"dy", &EntropyReport::dy},
    {"dtau", &EntropyReport::dtau},
    {"theta", &EntropyReport::theta},
    {"mu", &EntropyReport::mu},
    {"K", &EntropyReport::K},
    {"E0", &EntropyReport::E0},
    {"ineq_tolerance", &EntropyReport::ineq_tolerance},
    {"max_edge_value", &EntropyReport::max_edge_value},
    {"max_boundary_deviation", &EntropyReport::max_boundary_deviation},
    {"min_density", &EntropyReport::min_density},
    {"mass_drift", &EntropyReport::mass_drift},
    {"steps", &EntropyReport::steps},
    {"fit_rate", &EntropyReport::fit_rate},
    {"fit_rms", &EntropyReport::fit_rms},
};

std::vector<double> EntropyReport::*const kSeries[] = {
    &EntropyReport::tau, &EntropyReport::E,         &EntropyReport::D_alpha,  &EntropyReport::Xi1,
    &EntropyReport::Xi2, &EntropyReport::Xi3,       &EntropyReport::envelope, &EntropyReport::ineq_residual,
};

double smoothstep_ramp(const LimitSpec& limits, double radius, double y) {
  const double u = (y + radius) / (2.0 * radius);
  if (u <= 0.0) return limits.rho_minus;
  if (u >= 1.0) return limits.rho_plus;
  return limits.rho_minus + limits.jump() * u * u * (3.0 - 2.0 * u);
}

}  // namespace

double aligned_profile_half_width(const ExperimentConfig& cfg) {
  const double base = cfg.L_y + 0.5 * cfg.dy;
  const double extra = std::max(0.0, std::ceil((cfg.profile_L - base) / cfg.dy - 1e-9));
  return base + extra * cfg.dy;
}

ReferenceSetup prepare_reference(const ExperimentConfig& cfg) {
  cfg.validate();
  const PressureLaw law = cfg.law();
  ReferenceSetup s;
  s.kind = cfg.resolved_reference();
  const bool need_profile = !cfg.limits.coincident() || s.kind == ReferenceKind::profile ||
                            cfg.initial_base == InitialBase::profile;
  if (need_profile) {
    s.profile_L = aligned_profile_half_width(cfg);
    auto prof = std::make_shared<SimilarityProfile>(solve_profile(cfg.limits, law, s.profile_L, cfg.dy));
    if (!cfg.limits.coincident()) check_tail(*prof, cfg.limits);
    s.theta = prof->theta;
    s.mu = prof->mu;
    s.K = prof->K;
    s.profile = std::move(prof);
  }
  switch (s.kind) {
    case ReferenceKind::constant:
      s.ref = ReferencePair::constant(cfg.limits.rho_minus);
      break;
    case ReferenceKind::smoothed_step:
      s.ref = ReferencePair::smoothed_step(cfg.limits, cfg.smoothing_radius);
      break;
    case ReferenceKind::profile:
    case ReferenceKind::automatic:
      s.ref = ReferencePair::profile(s.profile, cfg.limits);
      break;
  }
  return s;
}

PhysicalState initial_state(const ExperimentConfig& cfg, const ReferenceSetup& setup) {
  PhysicalState st;
  st.x = cell_grid(-cfg.X, cfg.X, cfg.dx);
  st.t = 0.0;
  st.rho.resize(st.x.size);
  st.m.resize(st.x.size);
  const PressureLaw law = cfg.law();
  ReferencePair profile_pair = ReferencePair::constant(cfg.limits.rho_minus);
  if (cfg.initial_base == InitialBase::profile) profile_pair = ReferencePair::profile(setup.profile, cfg.limits);
  for (std::size_t i = 0; i < st.x.size; ++i) {
    const double x = st.x.at(i);
    double rho = 0.0, m = 0.0;
    switch (cfg.initial_base) {
      case InitialBase::step:
        rho = cfg.limits.step(x);
        break;
      case InitialBase::smoothed_step:
        rho = smoothstep_ramp(cfg.limits, cfg.smoothing_radius, x);
        break;
      case InitialBase::profile: {
        const RefSample s = profile_pair.sample(0.0, x, law);
        rho = s.rho;
        m = s.n;
        break;
      }
    }
    rho += cfg.density_bump(x);
    m += cfg.momentum_bump(x);
    if (rho < 0.0) throw ConfigError("initial density is negative at x = " + std::to_string(x));
    if (rho == 0.0) m = 0.0;
    st.rho[i] = rho;
    st.m[i] = m;
  }
  return st;
}

Simulation simulate(const ExperimentConfig& cfg, const ReferenceSetup& setup) {
  Simulation sim;
  sim.tau = cfg.tau_schedule();
  SolverConfig sc;
  sc.cfl = cfg.cfl;
  sc.order = cfg.order;
  for (double t : sim.tau) sc.snapshot_times.push_back(time_of_tau(t));
  RunOptions ro;
  ro.scaled_window = cfg.L_y;
  const PhysicalState init = initial_state(cfg, setup);
  sim.run = run(init, sc, cfg.law(), cfg.limits, sc.snapshot_times.back(), ro);
  sim.snapshots = sim.run.snapshots;
  if (sim.snapshots.size() != sim.tau.size()) throw NumericalFailure("snapshot schedule was not honoured");

  const double m0 = sim.run.meta.front().mass;
  for (const RunMetaRow& r : sim.run.meta) {
    const double drift = std::abs(r.mass - m0 - r.boundary_flux_mass) / std::abs(m0);
    sim.mass_drift = std::max(sim.mass_drift, drift);
  }
  sim.min_density = std::numeric_limits<double>::infinity();
  for (const auto& s : sim.snapshots) {
    for (double r : s.rho) sim.min_density = std::min(sim.min_density, r);
  }
  return sim;
}

EntropyReport diagnose(const ExperimentConfig& cfg, const ReferenceSetup& setup, const Simulation& sim,
                       std::vector<ScaledField>* scaled) {
  const PressureLaw law = cfg.law();
  const double alpha = cfg.limits.alpha;
  const UniformGrid y = cell_grid(-cfg.L_y, cfg.L_y, cfg.dy);

  EntropyReport rep;
  rep.reference = to_string(setup.kind);
  rep.rho_minus = cfg.limits.rho_minus;
  rep.rho_plus = cfg.limits.rho_plus;
  rep.alpha = alpha;
  rep.gamma = cfg.gamma;
  rep.k = cfg.k;
  rep.dx = cfg.dx;
  rep.dy = cfg.dy;
  rep.dtau = cfg.tau_step;
  rep.theta = setup.theta;
  rep.mu = setup.mu;
  rep.K = setup.K;
  rep.same_limits = cfg.limits.coincident();
  rep.max_boundary_deviation = sim.run.max_boundary_deviation;
  rep.min_density = sim.min_density;
  rep.mass_drift = sim.mass_drift;
  rep.steps = static_cast<double>(sim.run.steps);

  for (const PhysicalState& snap : sim.snapshots) {
    ScaledField f = to_scaled(snap, y);
    const TotalEntropy te = total_relative_entropy(f, setup.ref, alpha, law);
    const ErrorTerms er = error_terms(f, setup.ref, alpha, law);
    rep.tau.push_back(f.tau);
    rep.E.push_back(te.E);
    rep.D_alpha.push_back(te.D_alpha);
    rep.Xi1.push_back(er.Xi1);
    rep.Xi2.push_back(er.Xi2);
    rep.Xi3.push_back(er.Xi3);
    rep.edge_flag = rep.edge_flag || te.edge_flag;
    rep.max_edge_value = std::max(rep.max_edge_value, te.edge_value);
    if (scaled) scaled->push_back(std::move(f));
  }
  if (rep.tau.empty()) throw NumericalFailure("no snapshots to diagnose");
  rep.E0 = rep.E.front();

  const bool matching_reference = rep.same_limits ? setup.kind == ReferenceKind::constant
                                                  : setup.kind == ReferenceKind::profile;
  rep.envelope_binding = matching_reference && (rep.same_limits || (rep.theta > 0.0 && rep.theta < 0.5));
  for (double t : rep.tau) {
    const bool usable = rep.same_limits || rep.theta > 0.0;
    rep.envelope.push_back(usable ? theoretical_bound(t, rep.E0, rep.theta, rep.mu, rep.K, rep.same_limits) : kNaN);
  }

  const std::size_t n = rep.tau.size();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double dt = rep.tau[j + 1] - rep.tau[j];
    const double dE = (rep.E[j + 1] - rep.E[j]) / dt;
    const double D = 0.5 * (rep.D_alpha[j] + rep.D_alpha[j + 1]);
    const double E = 0.5 * (rep.E[j] + rep.E[j + 1]);
    const double Xi = 0.5 * (rep.Xi1[j] + rep.Xi2[j] + rep.Xi3[j] + rep.Xi1[j + 1] + rep.Xi2[j + 1] + rep.Xi3[j + 1]);
    rep.ineq_residual.push_back(dE + D + 0.5 * E - Xi);
  }
  rep.ineq_residual.push_back(kNaN);
  rep.ineq_tolerance = cfg.ineq_tol_factor * rep.E0 * (cfg.tau_step + cfg.dy * cfg.dy + cfg.dx / cfg.dy);

  rep.fit_rate = kNaN;
  rep.fit_rms = kNaN;
  try {
    const DecayRate fit = fit_decay_rate(rep, cfg.fit_tau_min, rep.tau.back());
    rep.fit_rate = fit.rate;
    rep.fit_rms = fit.rms;
  } catch (const DegenerateFit&) {
  }
  return rep;
}

EntropyReport run_experiment(const ExperimentConfig& cfg) {
  const ReferenceSetup setup = prepare_reference(cfg);
  const Simulation sim = simulate(cfg, setup);
  return diagnose(cfg, setup, sim);
}

double theoretical_bound(double tau, double E0, double theta, double mu, double K, bool same_limits) {
  if (same_limits) return std::exp(-0.5 * tau) * E0;
  if (!(theta > 0.0)) throw DomainError("jump envelope needs theta > 0; use the coincident branch");
  return std::exp(-(0.5 - theta) * tau + 0.5 * mu) * (E0 + K / theta);
}

DecayRate fit_decay_rate(const EntropyReport& report, double tau_min, double tau_max) {
  std::vector<double> t, v;
  const double eps = 1e-12 * std::max(1.0, std::abs(tau_max));
  for (std::size_t i = 0; i < report.tau.size(); ++i) {
    const double s = report.tau[i];
    if (s < tau_min - eps || s > tau_max + eps) continue;
    if (!(report.E[i] > 0.0)) throw DegenerateFit("nonpositive entropy sample in the fit window");
    t.push_back(s);
    v.push_back(-std::log(report.E[i]));
  }
  if (t.size() < 2) throw DegenerateFit("fit window holds fewer than two samples");
  const double n = static_cast<double>(t.size());
  double st = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sv += v[i];
  }
  const double tm = st / n, vm = sv / n;
  double stt = 0.0, stv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    stv += (t[i] - tm) * (v[i] - vm);
  }
  DecayRate out;
  out.rate = stv / stt;
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = v[i] - (vm + out.rate * (t[i] - tm));
    ss += r * r;
  }
  out.rms = std::sqrt(ss / n);
  out.samples = static_cast<int>(t.size());
  return out;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

EnvelopeCheck envelope_check(const EntropyReport& report, double slack) {
  EnvelopeCheck out;
  out.pass = !report.tau.empty();
  for (std::size_t i = 0; i < report.tau.size(); ++i) {
    const double env = report.envelope[i];
    if (std::isnan(env)) {
      out.pass = false;
      continue;
    }
    const double ratio = env > 0.0 ? report.E[i] / env : (report.E[i] > 0.0 ? HUGE_VAL : 0.0);
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_tau = report.tau[i];
    }
    if (report.E[i] > slack * env) out.pass = false;
  }
  return out;
}

DissipationCheck dissipation_check(const EntropyReport& report, double theta, double mu, double K, double E0,
                                   double slack) {
  DissipationCheck out;
  const std::size_t n = report.tau.size();
  out.tail.assign(n, 0.0);
  for (std::size_t j = n; j-- > 1;) {
    out.tail[j - 1] =
        out.tail[j] + 0.5 * (report.tau[j] - report.tau[j - 1]) * (report.D_alpha[j] + report.D_alpha[j - 1]);
  }
  if (n == 0) return out;
  if (!report.same_limits) {
    if (!(theta > 0.0 && theta < 0.5)) {
      out.threshold_tau = kNaN;
      return out;
    }
    out.threshold_tau = mu > 0.0 ? 2.0 * std::log(2.0 * mu / (1.0 - 2.0 * theta)) : -HUGE_VAL;
    if (out.threshold_tau > report.tau.back()) return out;
  }
  out.margin = HUGE_VAL;
  bool ok = true;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = report.tau[j];
    if (!report.same_limits && t < out.threshold_tau) continue;
    double bound = theoretical_bound(t, E0, theta, mu, K, report.same_limits);
    if (!report.same_limits) bound += 2.0 * K * std::exp(-0.5 * t);
    out.margin = std::min(out.margin, slack * bound - out.tail[j]);
    if (out.tail[j] > slack * bound) ok = false;
    ++out.checked;
  }
  if (out.checked == 0) return out;
  out.status = ok ? CheckStatus::pass : CheckStatus::fail;
  return out;
}

InequalityAudit inequality_audit(const EntropyReport& report) {
  InequalityAudit out;
  out.tolerance = report.ineq_tolerance;
  out.max_residual = -HUGE_VAL;
  for (double r : report.ineq_residual) {
    if (std::isnan(r)) continue;
    out.max_residual = std::max(out.max_residual, r);
  }
  out.violation = std::max(0.0, out.max_residual);
  out.pass = out.max_residual <= out.tolerance;
  return out;
}

bool same_report(const EntropyReport& a, const EntropyReport& b) {
  for (auto s : kSeries) {
    if (!same_series(a.*s, b.*s)) return false;
  }
  for (const Meta& m : kMeta) {
    if (!same_value(a.*(m.field), b.*(m.field))) return false;
  }
  return a.reference == b.reference && a.same_limits == b.same_limits && a.envelope_binding == b.envelope_binding &&
         a.edge_flag == b.edge_flag;
}

CsvTable report_table(const EntropyReport& r) {
  CsvTable t;
  t.comments.push_back("reference=" + r.reference + " same_limits=" + (r.same_limits ? "1" : "0") +
                       " envelope_binding=" + (r.envelope_binding ? "1" : "0") +
                       " edge_flag=" + (r.edge_flag ? "1" : "0"));
  std::string line;
  for (const Meta& m : kMeta) {
    if (!line.empty()) line += ' ';
    line += std::string(m.key) + "=" + format_double(r.*(m.field));
  }
  t.comments.push_back(line);
  for (const char* c : kColumns) t.columns.emplace_back(c);
  for (std::size_t i = 0; i < r.tau.size(); ++i) {
    std::vector<double> row;
    for (auto s : kSeries) row.push_back((r.*s).at(i));
    t.add_row(std::move(row));
  }
  return t;
}

EntropyReport report_from_table(const CsvTable& t) {
  EntropyReport r;
  const auto values = comment_values(t);
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("report header lacks '" + key + "'");
    return it->second;
  };
  r.reference = get("reference");
  r.same_limits = get("same_limits") == "1";
  r.envelope_binding = get("envelope_binding") == "1";
  r.edge_flag = get("edge_flag") == "1";
  for (const Meta& m : kMeta) r.*(m.field) = parse_double(get(m.key));
  std::size_t j = 0;
  for (auto s : kSeries) r.*s = t.column(kColumns[j++]);
  return r;
}

}  // namespace dwlab
