#include "dwlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

// Centred first difference; second-order one-sided at the ends.
std::vector<double> derivative(const UniformGrid& grid, std::span<const double> f) {
  const std::size_t n = f.size();
  const double h = grid.spacing;
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Residual at interior nodes 1..n-2 of the second-order scheme.
void ode_residual_2nd(const UniformGrid& grid, std::span<const double> rho, std::span<const double> P,
                      double alpha, std::vector<double>& out) {
  const std::size_t n = rho.size();
  const double h = grid.spacing;
  out.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y = grid.at(i);
    out[i] = (P[i + 1] - 2.0 * P[i] + P[i - 1]) / (alpha * h * h) +
             0.5 * y * (rho[i + 1] - rho[i - 1]) / (2.0 * h);
  }
}

// Solves a tridiagonal system in place (Thomas algorithm); sub[0] and sup[n-1]
// are unused.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

bool monotone(std::span<const double> rho, bool decreasing) {
  for (std::size_t i = 1; i < rho.size(); ++i) {
    if (decreasing ? rho[i] > rho[i - 1] : rho[i] < rho[i - 1]) return false;
  }
  return true;
}

}  // namespace

void LimitSpec::validate() const {
  if (!(rho_minus >= 0.0) || !(rho_plus >= 0.0)) throw DomainError("far-field densities must be nonnegative");
  if (!(alpha >= 0.0)) throw DomainError("friction coefficient must be nonnegative");
  if (!coincident()) {
    if (!(rho_minus > 0.0) || !(rho_plus > 0.0)) {
      throw DomainError("distinct far-field densities must both be positive");
    }
    if (!(alpha > 0.0)) throw DomainError("distinct far-field densities need alpha > 0");
  }
}

ProfileConstants profile_constants(const SimilarityProfile& profile, const PressureLaw& law,
                                   const LimitSpec& limits) {
  const auto& grid = profile.grid;
  const auto& rho = profile.rho;
  const std::size_t n = rho.size();
  if (n != grid.size) throw DomainError("profile samples do not match its grid");
  for (double r : rho) {
    if (!(r > 0.0)) throw DomainError("profile density must be positive at every node");
  }
  ProfileConstants out{0.0, 0.0, 0.0, std::vector<double>(n, 0.0)};
  const bool constant = std::all_of(rho.begin(), rho.end(), [&](double r) { return r == rho.front(); });
  if (constant || n < 3) return out;
  if (!(limits.alpha > 0.0)) throw DomainError("a non-constant profile needs alpha > 0");

  const double h = grid.spacing;
  const double alpha = limits.alpha;
  std::vector<double> P(n), H(n);
  for (std::size_t i = 0; i < n; ++i) {
    P[i] = law.p(rho[i]);
    H[i] = law.dh(rho[i]);
  }
  const auto Py = derivative(grid, P);
  std::vector<double> nstar(n), flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    nstar[i] = -Py[i] / alpha;
    flux[i] = nstar[i] * nstar[i] / rho[i];
  }
  const auto ny = derivative(grid, nstar);
  const auto fy = derivative(grid, flux);

  double sup_curv = 0.0;
  double mu = 0.0;
  double K = 0.0;
  const double k = law.k();
  const double g = law.gamma();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = grid.at(i);
    out.r_star[i] = -0.5 * y * ny[i] - 0.5 * nstar[i] + fy[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double curv = (H[i + 1] - 2.0 * H[i] + H[i - 1]) / (alpha * h * h);
    sup_curv = std::max(sup_curv, curv);
    const double R = std::abs(out.r_star[i]);
    mu = std::max(mu, R / (2.0 * k * std::pow(rho[i], g)) + 1.5 * R / rho[i]);
    K += R * h;
  }
  out.theta = std::max(2.0, g - 1.0) * sup_curv;
  out.mu = mu;
  out.K = K;
  return out;
}

SimilarityProfile make_profile(const UniformGrid& grid, std::vector<double> rho, const PressureLaw& law,
                               const LimitSpec& limits) {
  SimilarityProfile prof;
  prof.grid = grid;
  prof.rho = std::move(rho);
  const std::size_t n = prof.rho.size();
  if (n != grid.size) throw DomainError("profile samples do not match its grid");

  ProfileConstants c = profile_constants(prof, law, limits);
  prof.theta = c.theta;
  prof.mu = c.mu;
  prof.K = c.K;
  prof.r_star = std::move(c.r_star);

  std::vector<double> P(n);
  for (std::size_t i = 0; i < n; ++i) P[i] = law.p(prof.rho[i]);
  prof.rho_y = derivative(grid, prof.rho);
  prof.pressure_y = derivative(grid, P);
  prof.n.assign(n, 0.0);
  if (limits.alpha > 0.0) {
    for (std::size_t i = 0; i < n; ++i) prof.n[i] = -prof.pressure_y[i] / limits.alpha;
  } else if (max_abs(prof.pressure_y) > 0.0) {
    throw DomainError("a non-constant profile needs alpha > 0");
  }
  prof.n_y = derivative(grid, prof.n);

  prof.ode_residual.assign(n, 0.0);
  if (limits.alpha > 0.0 && n >= 5) {
    const double h = grid.spacing;
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const double Pyy =
          (-P[i - 2] + 16.0 * P[i - 1] - 30.0 * P[i] + 16.0 * P[i + 1] - P[i + 2]) / (12.0 * h * h);
      const auto& r = prof.rho;
      const double ry = (r[i - 2] - 8.0 * r[i - 1] + 8.0 * r[i + 1] - r[i + 2]) / (12.0 * h);
      prof.ode_residual[i] = Pyy / limits.alpha + 0.5 * grid.at(i) * ry;
    }
  }
  return prof;
}

double discrete_ode_residual(const UniformGrid& grid, std::span<const double> rho, const PressureLaw& law,
                             double alpha) {
  std::vector<double> P(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) P[i] = law.p(rho[i]);
  std::vector<double> F;
  ode_residual_2nd(grid, rho, P, alpha, F);
  return max_abs(F);
}

double darcy_residual(const SimilarityProfile& profile, const PressureLaw& law, const LimitSpec& limits) {
  const std::size_t n = profile.rho.size();
  std::vector<double> P(n);
  for (std::size_t i = 0; i < n; ++i) P[i] = law.p(profile.rho[i]);
  const auto Py = derivative(profile.grid, P);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    worst = std::max(worst, std::abs(limits.alpha * profile.n[i] + Py[i]));
  }
  return worst;
}

SimilarityProfile solve_profile(const LimitSpec& limits, const PressureLaw& law, double L, double dy,
                                const ProfileOptions& options) {
  limits.validate();
  if (!(L > 0.0) || !(dy > 0.0) || !(dy < L)) throw DomainError("profile grid needs 0 < dy < L");
  const UniformGrid grid = node_grid(-L, L, dy);
  const std::size_t n = grid.size;

  if (limits.coincident()) {
    if (!(limits.rho_minus > 0.0)) throw DomainError("the vacuum profile carries no density to sample");
    SimilarityProfile prof = make_profile(grid, std::vector<double>(n, limits.rho_minus), law, limits);
    return prof;
  }

  const double alpha = limits.alpha;
  const double h = grid.spacing;
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = 0.5 * (limits.rho_minus + limits.rho_plus) + 0.5 * limits.jump() * std::tanh(grid.at(i));
  }
  rho.front() = limits.rho_minus;
  rho.back() = limits.rho_plus;

  const double pmax = std::max(law.p(limits.rho_minus), law.p(limits.rho_plus));
  const double floor = 32.0 * std::numeric_limits<double>::epsilon() * pmax / (alpha * h * h);
  const double tol = std::max(options.tolerance, floor);

  std::vector<double> P(n), F, trial(n), Ptrial(n);
  auto residual_norm = [&](std::span<const double> r, std::vector<double>& Pbuf) {
    for (std::size_t i = 0; i < n; ++i) Pbuf[i] = law.p(r[i]);
    ode_residual_2nd(grid, r, Pbuf, alpha, F);
    return max_abs(F);
  };

  double res = residual_norm(rho, P);
  int iter = 0;
  const std::size_t m = n - 2;
  std::vector<double> sub(m), diag(m), sup(m), rhs(m);
  while (res > tol) {
    if (iter >= options.max_iterations) {
      throw SolverFailure("profile Newton iteration did not converge (residual " + std::to_string(res) + ")",
                          res);
    }
    ++iter;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = j + 1;
      const double y = grid.at(i);
      sub[j] = law.dp(rho[i - 1]) / (alpha * h * h) - y / (4.0 * h);
      diag[j] = -2.0 * law.dp(rho[i]) / (alpha * h * h);
      sup[j] = law.dp(rho[i + 1]) / (alpha * h * h) + y / (4.0 * h);
      rhs[j] = -F[i];
    }
    solve_tridiagonal(sub, diag, sup, rhs);

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
      trial = rho;
      bool positive = true;
      for (std::size_t j = 0; j < m; ++j) {
        trial[j + 1] = rho[j + 1] + lambda * rhs[j];
        positive = positive && trial[j + 1] > 0.0;
      }
      if (!positive) continue;
      const double trial_res = residual_norm(trial, Ptrial);
      if (trial_res < res) {
        rho.swap(trial);
        res = trial_res;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw SolverFailure("profile Newton line search stalled (residual " + std::to_string(res) + ")", res);
    }
    // Keep F consistent with the accepted iterate.
    res = residual_norm(rho, P);
  }

  // In the flat tails neighbouring values agree to rounding and may jitter;
  // jitter up to a few ulps is projected out, anything larger is an error.
  const bool decreasing = limits.rho_minus > limits.rho_plus;
  const double lo = std::min(limits.rho_minus, limits.rho_plus);
  const double hi = std::max(limits.rho_minus, limits.rho_plus);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * hi;
  for (double& r : rho) {
    if (r < lo - noise || r > hi + noise) throw SolverFailure("profile solution leaves the far-field range", res);
    r = std::clamp(r, lo, hi);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double step = decreasing ? rho[i] - rho[i - 1] : rho[i - 1] - rho[i];
    if (step > noise) throw SolverFailure("profile solution is not monotone", res);
    if (step > 0.0) rho[i] = rho[i - 1];
  }

  SimilarityProfile prof = make_profile(grid, std::move(rho), law, limits);
  prof.newton_residual = res;
  prof.newton_iterations = iter;
  if (!monotone(prof.rho, decreasing)) throw SolverFailure("profile solution is not monotone", res);
  return prof;
}

DecayFit decay_fit(const SimilarityProfile& profile, const LimitSpec& limits) {
  const double jump = std::abs(limits.jump());
  if (jump == 0.0) throw DegenerateFit("constant profile has no tail to fit");
  const auto& grid = profile.grid;
  const double L = std::max(std::abs(grid.front()), std::abs(grid.back()));
  // Deviations this small are dominated by the Newton tolerance, not the Gaussian tail.
  const double noise = 1e-9 * jump + 1e-13 * std::max(limits.rho_minus, limits.rho_plus);

  DecayFit fit;
  fit.c = std::numeric_limits<double>::infinity();
  bool any = false;
  bool all_ok = true;
  for (int side = -1; side <= 1; side += 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < grid.size; ++i) {
      const double y = grid.at(i);
      if (y * side <= 0.0) continue;
      const double ay = std::abs(y);
      if (ay < 0.5 * L || ay > 0.9 * L) continue;
      const double dev = std::abs(profile.rho[i] - limits.step(y));
      if (dev <= noise) continue;
      const double X = limits.alpha * y * y;
      const double Y = std::log(dev);
      pts.emplace_back(X, Y);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      ++count;
    }
    if (count < 5) continue;
    const double denom = count * sxx - sx * sx;
    if (!(denom > 0.0)) continue;
    const double slope = (count * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / count;
    double ss = 0.0;
    for (auto [X, Y] : pts) ss += (Y - intercept - slope * X) * (Y - intercept - slope * X);
    const double rms = std::sqrt(ss / count);
    const double c = -slope;
    const double C = std::exp(intercept) / jump;
    any = true;
    all_ok = all_ok && c > 0.0 && rms <= 0.25;
    fit.c = std::min(fit.c, c);
    fit.C = std::max(fit.C, C);
    fit.rms = std::max(fit.rms, rms);
    fit.samples += count;
  }
  if (!any) throw DegenerateFit("tail windows hold no deviation above rounding noise");
  fit.ok = all_ok && fit.c > 0.0;
  return fit;
}

double tail_estimate(const DecayFit& fit, const LimitSpec& limits, double L) {
  return fit.C * std::abs(limits.jump()) * std::exp(-fit.c * limits.alpha * L * L);
}

void check_tail(const SimilarityProfile& profile, const LimitSpec& limits, double tol) {
  if (limits.coincident()) return;
  const double L = std::max(std::abs(profile.grid.front()), std::abs(profile.grid.back()));
  DecayFit fit;
  try {
    fit = decay_fit(profile, limits);
  } catch (const DegenerateFit&) {
    // Deviation below rounding noise over the whole tail window.
    return;
  }
  if (!fit.ok) throw DomainError("profile tail does not fit a Gaussian envelope; enlarge L");
  const double tail = tail_estimate(fit, limits, L);
  if (tail > tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "profile tail at |y| = %g is %.3g, above %.3g; enlarge L", L, tail, tol);
    throw DomainError(buf);
  }
}

}  // namespace dwlab
