#include "dwlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

double velocity(double rho, double n) {
  if (rho == 0.0) {
    if (n != 0.0) throw VacuumViolation("zero density with nonzero momentum");
    return 0.0;
  }
  return n / rho;
}

double reference_velocity(double rho_bar, double n_bar, const PressureLaw& law) {
  if (rho_bar < 0.0) throw DomainError("reference density must be nonnegative");
  if (rho_bar == 0.0) {
    if (n_bar != 0.0) throw VacuumViolation("zero reference density with nonzero momentum");
    if (law.isothermal()) throw DomainError("vacuum reference requires gamma > 1");
    return 0.0;
  }
  return n_bar / rho_bar;
}

double centred(const AnalyticPair::Fn& f, double tau, double y, double h, bool in_tau) {
  if (in_tau) return (f(tau + h, y) - f(tau - h, y)) / (2.0 * h);
  return (f(tau, y + h) - f(tau, y - h)) / (2.0 * h);
}

Residuals residuals_for(const ReferencePair& ref, double tau, double y, const RefSample& s, double alpha) {
  Residuals r = reference_residuals(tau, y, s, alpha);
  if (ref.continuity_exact()) {
    r.R1 = 0.0;
    r.R = -r.R2;
  }
  return r;
}

bool exceeds(double lhs, double rhs) { return lhs > rhs + 1e-12 * std::max(std::abs(lhs), std::abs(rhs)); }

}  // namespace

EntropyDensity relative_entropy_density(double tau, double rho, double n, double rho_bar, double n_bar,
                                        const PressureLaw& law) {
  if (rho < 0.0) throw DomainError("density must be nonnegative");
  const double v = velocity(rho, n);
  const double vbar = reference_velocity(rho_bar, n_bar, law);
  const double w = v - vbar;
  const double decay = std::exp(-tau);
  const double h_rel = relative_quantities(law, rho, rho_bar).h_rel;

  EntropyDensity out;
  out.eta = 0.5 * decay * rho * w * w + h_rel;
  out.q = 0.5 * decay * n * w * w + vbar * h_rel;
  if (rho > 0.0) out.q += rho * (law.dh(rho) - law.dh(rho_bar)) * w;
  return out;
}

ReferencePair ReferencePair::constant(double rho_bar) {
  if (!(rho_bar >= 0.0)) throw DomainError("constant reference density must be nonnegative");
  ReferencePair r;
  r.kind_ = Kind::constant;
  r.value_ = rho_bar;
  return r;
}

ReferencePair ReferencePair::smoothed_step(const LimitSpec& limits, double radius) {
  limits.validate();
  if (!(radius > 0.0)) throw DomainError("smoothing radius must be positive");
  if (!(limits.rho_minus > 0.0 && limits.rho_plus > 0.0)) {
    throw DomainError("smoothed step needs positive far-field densities");
  }
  ReferencePair r;
  r.kind_ = Kind::smoothed_step;
  r.limits_ = limits;
  r.radius_ = radius;
  return r;
}

ReferencePair ReferencePair::profile(std::shared_ptr<const SimilarityProfile> profile, const LimitSpec& limits) {
  if (!profile || profile->rho.empty()) throw DomainError("empty profile reference");
  for (double v : profile->rho) {
    if (!(v > 0.0)) throw DomainError("profile reference needs positive density");
  }
  ReferencePair r;
  r.kind_ = Kind::profile;
  r.limits_ = limits;
  r.profile_ = std::move(profile);
  return r;
}

ReferencePair ReferencePair::analytic(AnalyticPair pair) {
  if (!pair.rho || !pair.n) throw DomainError("analytic reference needs rho and n callables");
  if (!(pair.fd_step > 0.0)) throw DomainError("finite-difference step must be positive");
  ReferencePair r;
  r.kind_ = Kind::analytic;
  r.analytic_ = std::make_shared<const AnalyticPair>(std::move(pair));
  return r;
}

RefSample ReferencePair::sample(double tau, double y, const PressureLaw& law) const {
  RefSample s;
  switch (kind_) {
    case Kind::constant:
      s.rho = value_;
      return s;
    case Kind::smoothed_step: {
      const double u = (y + radius_) / (2.0 * radius_);
      const double jump = limits_.jump();
      if (u <= 0.0) {
        s.rho = limits_.rho_minus;
      } else if (u >= 1.0) {
        s.rho = limits_.rho_plus;
      } else {
        s.rho = limits_.rho_minus + jump * u * u * (3.0 - 2.0 * u);
        s.rho_y = jump * 6.0 * u * (1.0 - u) / (2.0 * radius_);
      }
      s.pressure_y = law.dp(s.rho) * s.rho_y;
      return s;
    }
    case Kind::profile: {
      const SimilarityProfile& p = *profile_;
      const UniformGrid& g = p.grid;
      const double tol = 1e-9 * g.spacing;
      if (y < g.front() - tol) {
        s.rho = limits_.rho_minus;
        return s;
      }
      if (y > g.back() + tol) {
        s.rho = limits_.rho_plus;
        return s;
      }
      std::size_t i = 0;
      if (g.aligned_index(y, i)) {
        s.rho = p.rho[i];
        s.rho_y = p.rho_y[i];
        s.n = p.n[i];
        s.n_y = p.n_y[i];
        s.pressure_y = p.pressure_y[i];
        return s;
      }
      s.rho = interpolate_linear(g, p.rho, y);
      s.rho_y = interpolate_linear(g, p.rho_y, y);
      s.n = interpolate_linear(g, p.n, y);
      s.n_y = interpolate_linear(g, p.n_y, y);
      s.pressure_y = interpolate_linear(g, p.pressure_y, y);
      return s;
    }
    case Kind::analytic: {
      const AnalyticPair& a = *analytic_;
      const double h = a.fd_step;
      s.rho = a.rho(tau, y);
      s.n = a.n(tau, y);
      s.rho_tau = a.rho_tau ? a.rho_tau(tau, y) : centred(a.rho, tau, y, h, true);
      s.rho_y = a.rho_y ? a.rho_y(tau, y) : centred(a.rho, tau, y, h, false);
      s.n_tau = a.n_tau ? a.n_tau(tau, y) : centred(a.n, tau, y, h, true);
      s.n_y = a.n_y ? a.n_y(tau, y) : centred(a.n, tau, y, h, false);
      s.pressure_y = law.dp(s.rho) * s.rho_y;
      return s;
    }
  }
  return s;
}

TotalEntropy total_relative_entropy(const ScaledField& field, const ReferencePair& ref, double alpha,
                                    const PressureLaw& law) {
  const std::size_t N = field.y.size;
  if (field.rho.size() != N || field.n.size() != N) throw DomainError("field arrays do not match the grid");
  TotalEntropy out;
  std::vector<double> eta(N), diss(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double y = field.y.at(i);
    const RefSample s = ref.sample(field.tau, y, law);
    eta[i] = relative_entropy_density(field.tau, field.rho[i], field.n[i], s.rho, s.n, law).eta;
    const double w = velocity(field.rho[i], field.n[i]) - reference_velocity(s.rho, s.n, law);
    diss[i] = alpha * field.rho[i] * w * w;
  }
  out.E = midpoint_sum(field.y, eta);
  out.D_alpha = midpoint_sum(field.y, diss);
  if (N > 0) {
    out.edge_value = std::max(eta.front(), eta.back());
    out.edge_flag = out.edge_value > 1e-10;
  }
  return out;
}

Residuals reference_residuals(double tau, double y, const RefSample& s, double alpha) {
  Residuals r;
  r.R1 = s.rho_tau - 0.5 * y * s.rho_y + s.n_y;
  double convective = 0.0;
  double vbar = 0.0;
  if (s.rho > 0.0) {
    vbar = s.n / s.rho;
    convective = 2.0 * s.n * s.n_y / s.rho - vbar * vbar * s.rho_y;
  }
  r.R2 = s.n_tau - 0.5 * y * s.n_y - 0.5 * s.n + convective + std::exp(tau) * (s.pressure_y + alpha * s.n);
  r.R = vbar * r.R1 - r.R2;
  return r;
}

double velocity_gradient(const RefSample& s) {
  if (s.rho <= 0.0) return 0.0;
  return s.n_y / s.rho - s.n * s.rho_y / (s.rho * s.rho);
}

XiValues pointwise_error_terms(double tau, double rho, double n, const RefSample& s, const Residuals& r,
                               const PressureLaw& law) {
  const double decay = std::exp(-tau);
  const double vbar = reference_velocity(s.rho, s.n, law);
  const double w = velocity(rho, n) - vbar;
  const RelativeValue rel = relative_quantities(law, rho, s.rho);
  XiValues xi;
  xi.xi1 = -velocity_gradient(s) * (decay * rho * w * w + rel.p_rel);
  if (s.rho > 0.0) {
    xi.xi2 = decay * r.R * (rho / s.rho) * w;
    if (r.R1 != 0.0) xi.xi3 = -(rho - s.rho) * potential_eval(law, s.rho).d2h * r.R1;
  }
  return xi;
}

ErrorTerms error_terms(const ScaledField& field, const ReferencePair& ref, double alpha, const PressureLaw& law) {
  const std::size_t N = field.y.size;
  if (field.rho.size() != N || field.n.size() != N) throw DomainError("field arrays do not match the grid");
  ErrorTerms out;
  out.R1.resize(N);
  out.R2.resize(N);
  out.R.resize(N);
  out.xi1.resize(N);
  out.xi2.resize(N);
  out.xi3.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double y = field.y.at(i);
    const RefSample s = ref.sample(field.tau, y, law);
    const Residuals r = residuals_for(ref, field.tau, y, s, alpha);
    const XiValues xi = pointwise_error_terms(field.tau, field.rho[i], field.n[i], s, r, law);
    out.R1[i] = r.R1;
    out.R2[i] = r.R2;
    out.R[i] = r.R;
    out.xi1[i] = xi.xi1;
    out.xi2[i] = xi.xi2;
    out.xi3[i] = xi.xi3;
  }
  out.Xi1 = midpoint_sum(field.y, out.xi1);
  out.Xi2 = midpoint_sum(field.y, out.xi2);
  out.Xi3 = midpoint_sum(field.y, out.xi3);
  return out;
}

ExchangeResidual exchange_identity_residual(double tau, State u, State u1, State u2, const PressureLaw& law) {
  if (!(u1.rho > 0.0 && u2.rho > 0.0)) throw DomainError("reference densities must be positive");
  const double decay = std::exp(-tau);
  const double a = relative_entropy_density(tau, u.rho, u.n, u1.rho, u1.n, law).eta;
  const double b = relative_entropy_density(tau, u1.rho, u1.n, u2.rho, u2.n, law).eta;
  const double c = relative_entropy_density(tau, u.rho, u.n, u2.rho, u2.n, law).eta;
  const double v1 = u1.n / u1.rho;
  const double v2 = u2.n / u2.rho;
  const double t1 = -decay * (v1 - v2) * (u.n - u1.n);
  const double t2 = 0.5 * decay * (v1 * v1 - v2 * v2) * (u.rho - u1.rho);
  const double t3 = -(law.dh(u1.rho) - law.dh(u2.rho)) * (u.rho - u1.rho);
  ExchangeResidual out;
  out.absolute = std::abs(a + b - c - t1 - t2 - t3);
  out.scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(t1) + std::abs(t2) + std::abs(t3);
  return out;
}

double entropy_identity_residual(const AnalyticField& field, double tau, double y, double alpha,
                                 const PressureLaw& law, double h) {
  if (!(h > 0.0)) throw DomainError("difference step must be positive");
  auto eta = [&](double t, double z) {
    const double r = field.rho(t, z);
    const double n = field.n(t, z);
    return std::exp(-t) * n * n / (2.0 * r) + potential_eval(law, r).h;
  };
  auto q = [&](double t, double z) {
    const double r = field.rho(t, z);
    const double n = field.n(t, z);
    return std::exp(-t) * n * n * n / (2.0 * r * r) + n * law.dh(r);
  };
  const double eta_tau = (eta(tau + h, y) - eta(tau - h, y)) / (2.0 * h);
  const double eta_y = (eta(tau, y + h) - eta(tau, y - h)) / (2.0 * h);
  const double q_y = (q(tau, y + h) - q(tau, y - h)) / (2.0 * h);
  const double r = field.rho(tau, y);
  const double n = field.n(tau, y);
  return eta_tau - 0.5 * y * eta_y + q_y + alpha * n * n / r;
}

XiBoundReport xi_bound_check(const std::vector<XiSample>& samples, const ReferencePair& ref,
                             const PressureLaw& law, double alpha) {
  XiBoundReport rep;
  const double k = law.k();
  const double g = law.gamma();
  const double c1 = std::max(2.0, g - 1.0);
  for (const XiSample& smp : samples) {
    const RefSample s = ref.sample(smp.tau, smp.y, law);
    if (!(s.rho > 0.0)) throw DomainError("xi bounds need a reference density bounded away from zero");
    const Residuals r = residuals_for(ref, smp.tau, smp.y, s, alpha);
    const XiValues xi = pointwise_error_terms(smp.tau, smp.rho, smp.n, s, r, law);
    const double eta = relative_entropy_density(smp.tau, smp.rho, smp.n, s.rho, s.n, law).eta;
    const double h_rel = relative_quantities(law, smp.rho, s.rho).h_rel;
    const double vg = velocity_gradient(s);
    const double half = std::exp(-0.5 * smp.tau);
    const double absR = std::abs(r.R);

    if (exceeds(xi.xi1, c1 * std::max(0.0, -vg) * eta)) ++rep.xi1_upper;
    if (exceeds(std::abs(xi.xi1), c1 * std::abs(vg) * eta)) ++rep.xi1_abs;
    const double b2 = (1.0 / (2.0 * k * std::pow(s.rho, g)) + 3.0 / (2.0 * s.rho)) * absR * half * eta + half * absR;
    if (exceeds(std::abs(xi.xi2), b2)) ++rep.xi2;
    const double b3 = 2.0 * g * std::abs(r.R1) / s.rho * h_rel +
                      s.rho * std::abs(potential_eval(law, s.rho).d2h * r.R1);
    if (exceeds(std::abs(xi.xi3), b3)) ++rep.xi3;
    ++rep.evaluated;
  }
  return rep;
}

double gronwall_bound(double E0, const std::vector<double>& grid, const std::vector<double>& a,
                      const std::vector<double>& b, double tau) {
  if (grid.size() < 2 || a.size() != grid.size() || b.size() != grid.size()) {
    throw DomainError("gronwall_bound needs matching samples on at least two points");
  }
  if (tau < grid.front() || tau > grid.back() * (1.0 + 1e-12)) throw DomainError("tau outside the sample grid");
  std::vector<double> s{grid.front()}, av{a.front()}, bv{b.front()};
  for (std::size_t i = 1; i < grid.size() && s.back() < tau; ++i) {
    if (grid[i] <= tau) {
      s.push_back(grid[i]);
      av.push_back(a[i]);
      bv.push_back(b[i]);
    } else {
      const double w = (tau - grid[i - 1]) / (grid[i] - grid[i - 1]);
      s.push_back(tau);
      av.push_back((1.0 - w) * a[i - 1] + w * a[i]);
      bv.push_back((1.0 - w) * b[i - 1] + w * b[i]);
    }
  }
  const std::size_t n = s.size();
  std::vector<double> A(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) A[i] = A[i - 1] + 0.5 * (s[i] - s[i - 1]) * (av[i] + av[i - 1]);
  const double At = A.back();
  double integral = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double f0 = bv[i - 1] * std::exp(At - A[i - 1]);
    const double f1 = bv[i] * std::exp(At - A[i]);
    integral += 0.5 * (s[i] - s[i - 1]) * (f0 + f1);
  }
  return E0 * std::exp(At) + integral;
}

CoercivityConstants coercivity_constants(const PressureLaw& law, double delta, double M) {
  if (!(delta > 0.0 && M > delta)) throw DomainError("coercivity needs 0 < delta < M");
  const double g = law.gamma();
  const double k = law.k();
  const double safety = 0.99;
  CoercivityConstants c;
  c.delta = delta;
  c.M = M;
  c.r0 = 2.0 * M;

  // h(rho|rb) / (rho - rb)^2 = gamma k rb^(gamma-2) F_gamma(z) / (z-1)^2 with z = rho / rb;
  // the quotient is monotone in z, so its minimum over [0, r0/rb] sits at an end.
  auto quotient = [&](double z) {
    if (z == 0.0) return 1.0 / g;
    return entropy_generator(g, z) / ((z - 1.0) * (z - 1.0));
  };
  double low = std::numeric_limits<double>::infinity();
  const int samples = 4000;
  for (int i = 0; i <= samples; ++i) {
    const double rb = delta + (M - delta) * i / samples;
    const double zmax = c.r0 / rb;
    const double m = std::min(quotient(0.0), quotient(zmax));
    low = std::min(low, g * k * std::pow(rb, g - 2.0) * m);
  }
  c.c_low = safety * low;

  // For rho > r0 we have z >= 2 and h(rho|rb) / |rho - rb|^gamma = gamma k F_gamma(z) / (z-1)^gamma.
  double high = std::numeric_limits<double>::infinity();
  const double zlo = std::log(2.0), zhi = std::log(1e8);
  for (int i = 0; i <= samples; ++i) {
    const double z = std::exp(zlo + (zhi - zlo) * i / samples);
    high = std::min(high, g * k * entropy_generator(g, z) / std::pow(z - 1.0, g));
  }
  if (g > 1.0) high = std::min(high, k / (g - 1.0));
  c.c_high = safety * high;

  c.C_low = std::min(1.0 / (2.0 * c.r0), c.c_low);
  const double lambda = g / (g + 1.0);
  const double C_gamma =
      std::pow(2.0 * lambda, -lambda) * std::pow(0.5 * c.c_high / (1.0 - lambda), 1.0 - lambda);
  c.C_high = std::min(C_gamma * std::pow(2.0, -lambda), 0.5 * c.c_high);
  return c;
}

double coercivity_lower_bound(const CoercivityConstants& c, const PressureLaw& law, double tau, double rho,
                              double n, double rho_bar) {
  const double N = std::exp(-tau) * n * n;
  const double d = std::abs(rho - rho_bar);
  if (rho <= c.r0) return c.C_low * (N + d * d);
  const double g = law.gamma();
  return c.C_high * (std::pow(N, g / (g + 1.0)) + std::pow(d, g));
}

double flux_control_ratio(double tau, State u1, State u2, const PressureLaw& law) {
  const EntropyDensity e = relative_entropy_density(tau, u1.rho, u1.n, u2.rho, u2.n, law);
  if (e.eta == 0.0) return 0.0;
  const double weight = std::abs(velocity(u1.rho, u1.n)) + std::abs(reference_velocity(u2.rho, u2.n, law)) +
                        std::exp(0.5 * tau);
  return std::abs(e.q) / (weight * e.eta);
}

}  // namespace dwlab
