#include "dwlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

constexpr std::size_t kGhosts = 2;
constexpr double kVacuumGuard = 1e-8;

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

// Flux-difference operator on the extended arrays (ghosts + cells).
class HyperbolicOperator {
 public:
  HyperbolicOperator(std::size_t cells, const PressureLaw& law, const LimitSpec& limits, int order)
      : n_(cells), law_(law), order_(order), rho_(cells + 2 * kGhosts), m_(cells + 2 * kGhosts),
        flux_rho_(cells + 1), flux_m_(cells + 1) {
    for (std::size_t g = 0; g < kGhosts; ++g) {
      rho_[g] = limits.rho_minus;
      m_[g] = 0.0;
      rho_[n_ + kGhosts + g] = limits.rho_plus;
      m_[n_ + kGhosts + g] = 0.0;
    }
    if (order_ == 2) {
      u_.resize(cells + 2 * kGhosts);
      slope_rho_.resize(cells + 2 * kGhosts);
      slope_u_.resize(cells + 2 * kGhosts);
    }
  }

  // drho, dm receive -(F_{i+1/2} - F_{i-1/2}) / dx; returns the net boundary
  // inflow F_{1/2} - F_{N+1/2}.
  Conserved apply(const std::vector<double>& rho, const std::vector<double>& m, double dx,
                  std::vector<double>& drho, std::vector<double>& dm) {
    std::copy(rho.begin(), rho.end(), rho_.begin() + kGhosts);
    std::copy(m.begin(), m.end(), m_.begin() + kGhosts);
    const std::size_t ext = n_ + 2 * kGhosts;

    if (order_ == 2) {
      for (std::size_t i = 0; i < ext; ++i) u_[i] = rho_[i] > 0.0 ? m_[i] / rho_[i] : 0.0;
      slope_rho_[0] = slope_u_[0] = 0.0;
      slope_rho_[ext - 1] = slope_u_[ext - 1] = 0.0;
      for (std::size_t i = 1; i + 1 < ext; ++i) {
        if (rho_[i - 1] < kVacuumGuard || rho_[i] < kVacuumGuard || rho_[i + 1] < kVacuumGuard) {
          slope_rho_[i] = slope_u_[i] = 0.0;
          continue;
        }
        slope_rho_[i] = minmod(rho_[i] - rho_[i - 1], rho_[i + 1] - rho_[i]);
        slope_u_[i] = minmod(u_[i] - u_[i - 1], u_[i + 1] - u_[i]);
      }
    }

    for (std::size_t j = 0; j <= n_; ++j) {
      const std::size_t l = j + kGhosts - 1;
      const std::size_t r = l + 1;
      Conserved left{rho_[l], m_[l]};
      Conserved right{rho_[r], m_[r]};
      if (order_ == 2) {
        const double rl = rho_[l] + 0.5 * slope_rho_[l];
        const double ul = u_[l] + 0.5 * slope_u_[l];
        const double rr = rho_[r] - 0.5 * slope_rho_[r];
        const double ur = u_[r] - 0.5 * slope_u_[r];
        left = {rl, rl * ul};
        right = {rr, rr * ur};
      }
      const Conserved f = numerical_flux(left, right, law_);
      flux_rho_[j] = f.rho;
      flux_m_[j] = f.m;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      drho[i] = -(flux_rho_[i + 1] - flux_rho_[i]) / dx;
      dm[i] = -(flux_m_[i + 1] - flux_m_[i]) / dx;
    }
    return {flux_rho_[0] - flux_rho_[n_], flux_m_[0] - flux_m_[n_]};
  }

 private:
  std::size_t n_;
  const PressureLaw& law_;
  int order_;
  std::vector<double> rho_, m_, u_, slope_rho_, slope_u_;
  std::vector<double> flux_rho_, flux_m_;
};

void check_admissible(std::vector<double>& rho, std::vector<double>& m, double rho_floor, double t) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!std::isfinite(rho[i]) || !std::isfinite(m[i])) {
      throw NumericalFailure("non-finite value in cell " + std::to_string(i) + " at t = " + std::to_string(t));
    }
    if (rho[i] < 0.0) {
      throw NumericalFailure("negative density in cell " + std::to_string(i) + " at t = " + std::to_string(t));
    }
    if (rho[i] <= rho_floor) m[i] = 0.0;
  }
}

double damp(std::vector<double>& m, double factor, double dx) {
  double loss = 0.0;
  for (double& v : m) {
    const double before = v;
    v *= factor;
    loss += before - v;
  }
  return loss * dx;
}

void add_source(const SourceFunction& source, const UniformGrid& x, double t, double dt, std::vector<double>& rho,
                std::vector<double>& m) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const Conserved s = source(t, x.at(i));
    rho[i] += dt * s.rho;
    m[i] += dt * s.m;
  }
}

}  // namespace

double PhysicalState::mass() const {
  double s = 0.0;
  for (double r : rho) s += r;
  return s * x.spacing;
}

double PhysicalState::momentum() const {
  double s = 0.0;
  for (double v : m) s += v;
  return s * x.spacing;
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0) || cfl > 0.5) throw ConfigError("cfl must lie in (0, 0.5]");
  if (!(rho_floor >= 0.0)) throw ConfigError("rho_floor must be nonnegative");
  if (order != 1 && order != 2) throw ConfigError("solver order must be 1 or 2");
}

Conserved physical_flux(Conserved u, const PressureLaw& law) {
  if (u.rho == 0.0) {
    if (u.m != 0.0) throw VacuumViolation("vacuum cell carries nonzero momentum");
    return {0.0, law.p(0.0)};
  }
  return {u.m, u.m * u.m / u.rho + law.p(u.rho)};
}

double wave_speed(Conserved u, const PressureLaw& law) {
  if (u.rho == 0.0) return 0.0;
  return std::abs(u.m / u.rho) + std::sqrt(law.dp(u.rho));
}

Conserved numerical_flux(Conserved left, Conserved right, const PressureLaw& law) {
  const Conserved fl = physical_flux(left, law);
  const Conserved fr = physical_flux(right, law);
  const double s = std::max(wave_speed(left, law), wave_speed(right, law));
  return {0.5 * (fl.rho + fr.rho) - 0.5 * s * (right.rho - left.rho),
          0.5 * (fl.m + fr.m) - 0.5 * s * (right.m - left.m)};
}

double stable_dt(double dx, double s_max, double cfl) {
  if (!(s_max > 0.0)) throw NumericalFailure("wave speed vanishes everywhere; no CFL step");
  return cfl * dx / s_max;
}

double max_wave_speed(const PhysicalState& state, const LimitSpec& limits, const PressureLaw& law) {
  double s = std::max(wave_speed({limits.rho_minus, 0.0}, law), wave_speed({limits.rho_plus, 0.0}, law));
  for (std::size_t i = 0; i < state.rho.size(); ++i) s = std::max(s, wave_speed({state.rho[i], state.m[i]}, law));
  return s;
}

StepReport advance(PhysicalState& state, const SolverConfig& cfg, const PressureLaw& law, const LimitSpec& limits,
                   double dt_max) {
  const std::size_t n = state.rho.size();
  const double dx = state.dx();
  const double alpha = limits.alpha;
  StepReport rep;
  rep.dt = std::min(stable_dt(dx, max_wave_speed(state, limits, law), cfg.cfl), dt_max);
  const double dt = rep.dt;
  rep.damping_estimate = alpha * state.momentum() * dt;

  HyperbolicOperator op(n, law, limits, cfg.order);
  std::vector<double> drho(n), dm(n);

  if (cfg.order == 1) {
    const Conserved inflow = op.apply(state.rho, state.m, dx, drho, dm);
    for (std::size_t i = 0; i < n; ++i) {
      state.rho[i] += dt * drho[i];
      state.m[i] += dt * dm[i];
    }
    if (cfg.source) add_source(cfg.source, state.x, state.t, dt, state.rho, state.m);
    check_admissible(state.rho, state.m, cfg.rho_floor, state.t + dt);
    rep.boundary_mass = dt * inflow.rho;
    rep.boundary_momentum = dt * inflow.m;
    rep.damping_loss = damp(state.m, std::exp(-alpha * dt), dx);
  } else {
    rep.damping_loss = damp(state.m, std::exp(-0.5 * alpha * dt), dx);

    std::vector<double> rho1(state.rho), m1(state.m);
    const Conserved in0 = op.apply(state.rho, state.m, dx, drho, dm);
    for (std::size_t i = 0; i < n; ++i) {
      rho1[i] += dt * drho[i];
      m1[i] += dt * dm[i];
    }
    if (cfg.source) add_source(cfg.source, state.x, state.t, dt, rho1, m1);
    check_admissible(rho1, m1, cfg.rho_floor, state.t + dt);

    const Conserved in1 = op.apply(rho1, m1, dx, drho, dm);
    for (std::size_t i = 0; i < n; ++i) {
      rho1[i] += dt * drho[i];
      m1[i] += dt * dm[i];
    }
    if (cfg.source) add_source(cfg.source, state.x, state.t + dt, dt, rho1, m1);
    for (std::size_t i = 0; i < n; ++i) {
      state.rho[i] = 0.5 * (state.rho[i] + rho1[i]);
      state.m[i] = 0.5 * (state.m[i] + m1[i]);
    }
    check_admissible(state.rho, state.m, cfg.rho_floor, state.t + dt);
    rep.boundary_mass = 0.5 * dt * (in0.rho + in1.rho);
    rep.boundary_momentum = 0.5 * dt * (in0.m + in1.m);

    rep.damping_loss += damp(state.m, std::exp(-0.5 * alpha * dt), dx);
  }
  state.t += dt;
  return rep;
}

StepResult step(const PhysicalState& state, const SolverConfig& cfg, const PressureLaw& law,
                const LimitSpec& limits, double dt_max) {
  StepResult out{state, {}};
  out.report = advance(out.state, cfg, law, limits, dt_max);
  return out;
}

RunResult run(const PhysicalState& initial, const SolverConfig& cfg, const PressureLaw& law,
              const LimitSpec& limits, double t_end, const RunOptions& options) {
  cfg.validate();
  if (!(t_end > initial.t)) throw ConfigError("t_end must exceed the initial time");
  if (initial.rho.size() != initial.x.size || initial.m.size() != initial.x.size) {
    throw ConfigError("state arrays do not match the grid");
  }
  if (options.scaled_window > 0.0) {
    const double needed = options.scaled_window * std::sqrt(1.0 + t_end);
    if (initial.half_width() < needed * (1.0 - 1e-12)) {
      throw ConfigError("physical half-width " + std::to_string(initial.half_width()) +
                        " is smaller than L_y sqrt(1 + t_end) = " + std::to_string(needed));
    }
  }
  std::vector<double> times = cfg.snapshot_times;
  std::sort(times.begin(), times.end());
  const double time_eps = 1e-12 * std::max(1.0, t_end);
  for (double s : times) {
    if (s < initial.t - time_eps || s > t_end + time_eps) {
      throw ConfigError("snapshot time " + std::to_string(s) + " outside [t0, t_end]");
    }
  }
  times.erase(std::unique(times.begin(), times.end(),
                          [&](double a, double b) { return std::abs(a - b) <= time_eps; }),
              times.end());

  RunResult result;
  PhysicalState state = initial;
  std::size_t next = 0;
  while (next < times.size() && times[next] <= state.t + time_eps) {
    result.snapshots.push_back(state);
    ++next;
  }

  double cum_mass = 0.0, cum_mom = 0.0, cum_loss = 0.0, cum_est = 0.0;
  result.meta.push_back({state.t, 0.0, state.mass(), state.momentum(), 0.0, 0.0, 0.0, 0.0});
  const std::size_t last = state.rho.size() - 1;
  while (state.t < t_end - time_eps) {
    const double target = next < times.size() ? times[next] : t_end;
    const StepReport rep = advance(state, cfg, law, limits, target - state.t);
    if (std::abs(state.t - target) <= time_eps) state.t = target;
    ++result.steps;
    cum_mass += rep.boundary_mass;
    cum_mom += rep.boundary_momentum;
    cum_loss += rep.damping_loss;
    cum_est += rep.damping_estimate;
    result.meta.push_back({state.t, rep.dt, state.mass(), state.momentum(), cum_mass, cum_mom, cum_loss, cum_est});

    const double dev = std::max({std::abs(state.rho[0] - limits.rho_minus), std::abs(state.m[0]),
                                 std::abs(state.rho[last] - limits.rho_plus), std::abs(state.m[last])});
    result.max_boundary_deviation = std::max(result.max_boundary_deviation, dev);
    while (next < times.size() && times[next] <= state.t + time_eps) {
      result.snapshots.push_back(state);
      ++next;
    }
  }
  if (times.empty()) result.snapshots.push_back(state);
  result.boundary_disturbed = result.max_boundary_deviation > options.boundary_tolerance;
  return result;
}

}  // namespace dwlab
