#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "dwlab/entropy.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/verify.hpp"

using namespace dwlab;
using doctest::Approx;

namespace {

const PressureLaw law2(1.0, 2.0);

// Piecewise cubic Lagrange interpolation, smooth enough for centred differences.
double cubic(const UniformGrid& g, const std::vector<double>& v, double y) {
  const double r = (y - g.origin) / g.spacing;
  long i = static_cast<long>(std::floor(r)) - 1;
  i = std::clamp<long>(i, 0, static_cast<long>(g.size) - 4);
  const double s = r - static_cast<double>(i);
  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (s - b) / (a - b);
    out += w * v[static_cast<std::size_t>(i + a)];
  }
  return out;
}

ScaledField uniform_field(double tau, double L, double dy, double rho, double n) {
  ScaledField f;
  f.tau = tau;
  f.y = cell_grid(-L, L, dy);
  f.rho.assign(f.y.size, rho);
  f.n.assign(f.y.size, n);
  return f;
}

}  // namespace

TEST_CASE("relative entropy density examples") {
  auto e = relative_entropy_density(0.0, 1.0, 1.0, 1.0, 0.0, law2);
  CHECK(e.eta == Approx(0.5));
  e = relative_entropy_density(0.7, 1.3, -0.4, 1.3, -0.4, law2);
  CHECK(e.eta == 0.0);
  CHECK(e.q == 0.0);
  e = relative_entropy_density(0.0, 1.0, 2.0, 1.0, 0.0, law2);
  CHECK(e.q == Approx(4.0));
  CHECK_THROWS_AS(relative_entropy_density(0.0, 0.0, 1.0, 1.0, 0.0, law2), VacuumViolation);
  // vacuum reference for a vacuum-admissible law
  e = relative_entropy_density(0.0, 2.0, 0.0, 0.0, 0.0, law2);
  CHECK(e.eta == Approx(4.0));
  CHECK_THROWS_AS(relative_entropy_density(0.0, 2.0, 0.0, 0.0, 0.0, PressureLaw(1, 1)), DomainError);
}

TEST_CASE("relative entropy is nonnegative and vanishes only at the reference") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rr(0.05, 4.0), nn(-3.0, 3.0), tt(0.0, 5.0);
  for (int i = 0; i < 20000; ++i) {
    const double rho = rr(rng), rb = rr(rng), n = nn(rng), nb = nn(rng), tau = tt(rng);
    const double eta = relative_entropy_density(tau, rho, n, rb, nb, law2).eta;
    CHECK(eta >= 0.0);
    if (rho != rb || n / rho != nb / rb) CHECK(eta > 0.0);
  }
}

TEST_CASE("total relative entropy") {
  const ReferencePair one = ReferencePair::constant(1.0);
  ScaledField f = uniform_field(0.0, 2.0, 0.1, 1.0, 0.0);
  auto te = total_relative_entropy(f, one, 2.0, law2);
  CHECK(te.E == 0.0);
  CHECK(te.D_alpha == 0.0);

  for (std::size_t i = 0; i < f.y.size; ++i)
    if (f.y.at(i) > 0.0 && f.y.at(i) < 1.0) f.n[i] = 1.0;
  te = total_relative_entropy(f, one, 2.0, law2);
  CHECK(te.E == Approx(0.5));
  CHECK(te.D_alpha == Approx(2.0));
  CHECK_FALSE(te.edge_flag);

  f.n.back() = 1.0;
  CHECK(total_relative_entropy(f, one, 2.0, law2).edge_flag);
}

TEST_CASE("error terms against constant and profile references") {
  ScaledField f = uniform_field(0.3, 4.0, 0.05, 1.0, 0.0);
  for (std::size_t i = 0; i < f.y.size; ++i) {
    f.rho[i] += 0.2 * std::exp(-f.y.at(i) * f.y.at(i));
    f.n[i] = 0.1 * std::sin(f.y.at(i));
  }
  ErrorTerms e = error_terms(f, ReferencePair::constant(1.0), 1.0, law2);
  for (std::size_t i = 0; i < f.y.size; ++i) {
    CHECK(e.R1[i] == 0.0);
    CHECK(e.R2[i] == 0.0);
    CHECK(e.xi1[i] == 0.0);
    CHECK(e.xi2[i] == 0.0);
    CHECK(e.xi3[i] == 0.0);
  }

  const LimitSpec lim{1.2, 0.8, 1.0};
  const auto prof = std::make_shared<SimilarityProfile>(solve_profile(lim, law2, 8.0, 0.05));
  const ReferencePair ref = ReferencePair::profile(prof, lim);
  f.y = prof->grid;
  f.rho = prof->rho;
  f.n.assign(f.y.size, 0.0);
  for (std::size_t i = 0; i < f.y.size; ++i) f.rho[i] += 0.05 * std::exp(-f.y.at(i) * f.y.at(i));
  e = error_terms(f, ref, 1.0, law2);
  double r2_gap = 0.0;
  for (std::size_t i = 0; i < f.y.size; ++i) {
    CHECK(e.R1[i] == 0.0);
    CHECK(e.xi3[i] == 0.0);
    r2_gap = std::max(r2_gap, std::abs(e.R2[i] - prof->r_star[i]));
  }
  // the e^tau bracket only cancels to discretisation accuracy
  CHECK(r2_gap < 1e-5);
  CHECK(e.Xi3 == 0.0);
}

TEST_CASE("error terms against an exact solution") {
  const double alpha = 1.0;
  const AnalyticField exact = linear_velocity_solution(alpha, 0.5, 1.0);
  AnalyticPair pair;
  pair.rho = exact.rho;
  pair.n = exact.n;
  pair.fd_step = 1e-4;
  const ReferencePair ref = ReferencePair::analytic(pair);
  ScaledField f = uniform_field(0.5, 3.0, 0.05, 1.0, 0.0);
  for (std::size_t i = 0; i < f.y.size; ++i) {
    f.rho[i] = exact.rho(f.tau, f.y.at(i)) + 0.01;
    f.n[i] = exact.n(f.tau, f.y.at(i));
  }
  const ErrorTerms e = error_terms(f, ref, alpha, law2);
  for (std::size_t i = 0; i < f.y.size; ++i) {
    CHECK(std::abs(e.R1[i]) < 1e-6);
    CHECK(std::abs(e.R2[i]) < 1e-5);
  }
  CHECK(std::abs(e.Xi2) < 1e-5);
  CHECK(std::abs(e.Xi3) < 1e-5);
}

TEST_CASE("exchange identity") {
  const auto r = exchange_identity_residual(0.0, {2, 1}, {1, 0.5}, {1.5, -1}, law2);
  CHECK(r.relative() < 1e-14);
  CHECK(exchange_identity_residual(0.4, {1.1, 0.2}, {1.1, 0.2}, {1.1, 0.2}, law2).absolute == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rr(0.05, 4.0), nn(-3.0, 3.0), tt(0.0, 5.0), gg(1.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const PressureLaw law(1.0, gg(rng));
    const double tau = tt(rng);
    const State u{rr(rng), nn(rng)}, u1{rr(rng), nn(rng)}, u2{rr(rng), nn(rng)};
    worst = std::max(worst, exchange_identity_residual(tau, u, u1, u2, law).relative());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("entropy identity") {
  AnalyticField constant{[](double, double) { return 1.3; }, [](double, double) { return 0.0; }};
  CHECK(std::abs(entropy_identity_residual(constant, 0.5, 0.3, 1.0, law2, 1e-3)) < 1e-12);

  const AnalyticField exact = linear_velocity_solution(1.0, 0.5, 1.0);
  const double r1 = entropy_identity_residual(exact, 0.7, 0.8, 1.0, law2, 0.02);
  const double r2 = entropy_identity_residual(exact, 0.7, 0.8, 1.0, law2, 0.01);
  CHECK(std::abs(r1 / r2) == Approx(4.0).epsilon(0.05));

  // the stationary profile does not solve the evolution system
  const LimitSpec lim{1.2, 0.8, 1.0};
  const auto p = solve_profile(lim, law2, 8.0, 0.002);
  const AnalyticField prof{[&](double, double y) { return cubic(p.grid, p.rho, y); },
                           [&](double, double y) { return cubic(p.grid, p.n, y); }};
  CHECK(entropy_identity_residual(prof, 0.0, -1.0, 1.0, law2, 0.01) == Approx(-5.8747661357e-03).epsilon(1e-3));
  CHECK(entropy_identity_residual(prof, 0.0, 0.5, 1.0, law2, 0.01) == Approx(-1.2253762508e-02).epsilon(1e-3));
  CHECK(entropy_identity_residual(prof, 0.0, 1.0, 1.0, law2, 0.01) == Approx(-9.1735874851e-03).epsilon(1e-3));
}

TEST_CASE("xi bounds") {
  std::vector<XiSample> samples;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> yy(-6.0, 6.0), rr(0.1, 3.0), nn(-2.0, 2.0), tt(0.0, 4.0);
  for (int i = 0; i < 5000; ++i) samples.push_back({tt(rng), yy(rng), rr(rng), nn(rng)});

  auto rep = xi_bound_check(samples, ReferencePair::constant(1.0), law2, 1.0);
  CHECK(rep.total() == 0);
  CHECK(rep.evaluated == samples.size());

  const LimitSpec lim{1.2, 0.8, 1.0};
  const auto prof = std::make_shared<SimilarityProfile>(solve_profile(lim, law2, 8.0, 0.01));
  const ReferencePair ref = ReferencePair::profile(prof, lim);
  rep = xi_bound_check(samples, ref, law2, 1.0);
  CHECK(rep.total() == 0);

  std::vector<XiSample> at_ref;
  for (int i = 0; i < 100; ++i) {
    const double y = yy(rng), tau = tt(rng);
    const RefSample s = ref.sample(tau, y, law2);
    at_ref.push_back({tau, y, s.rho, s.n});
  }
  CHECK(xi_bound_check(at_ref, ref, law2, 1.0).total() == 0);
}

TEST_CASE("gronwall bound") {
  std::vector<double> grid, a, b;
  for (int i = 0; i <= 200; ++i) grid.push_back(0.01 * i);
  a.assign(grid.size(), -0.5);
  b.assign(grid.size(), 0.0);
  CHECK(gronwall_bound(1.0, grid, a, b, 1.0) == Approx(std::exp(-0.5)).epsilon(1e-4));

  a.assign(grid.size(), 0.0);
  b.assign(grid.size(), 1.0);
  CHECK(gronwall_bound(0.0, grid, a, b, 2.0) == Approx(2.0));

  const double theta = 0.1, mu = 0.3, K = 0.2;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a[i] = -0.5 + theta + mu * std::exp(-grid[i] / 2);
    b[i] = K * std::exp(-grid[i] / 2);
  }
  const double g = gronwall_bound(1.0, grid, a, b, 2.0);
  CHECK(g <= std::exp(-(0.5 - theta) * 2.0 + mu / 2) * (1.0 + K / theta));
  CHECK(g > 0.0);
  CHECK_THROWS_AS(gronwall_bound(1.0, grid, a, b, 3.0), DomainError);
}

TEST_CASE("coercivity and flux control") {
  for (double gamma : {1.5, 2.0, 3.0}) {
    const PressureLaw law(1.0, gamma);
    const auto c = coercivity_constants(law, 0.5, 2.0);
    CHECK(c.r0 == Approx(4.0));
    CHECK(c.C_low > 0.0);
    CHECK(c.C_high > 0.0);
    std::mt19937_64 rng(static_cast<unsigned>(gamma * 10));
    std::uniform_real_distribution<double> rb(0.5, 2.0), rr(0.0, 20.0), nn(-5.0, 5.0), tt(0.0, 4.0);
    for (int i = 0; i < 5000; ++i) {
      const double tau = tt(rng), rho = rr(rng), n = rho > 0 ? nn(rng) : 0.0, bar = rb(rng);
      const double eta = relative_entropy_density(tau, rho, n, bar, 0.0, law).eta;
      CHECK(eta >= coercivity_lower_bound(c, law, tau, rho, n, bar) * (1 - 1e-12));
    }
  }
  CHECK_THROWS_AS(coercivity_constants(law2, 2.0, 1.0), DomainError);
  CHECK(flux_control_ratio(0.0, {1.0, 0.0}, {1.0, 0.0}, law2) == 0.0);
  CHECK(std::isfinite(flux_control_ratio(1.0, {1.5, 0.3}, {0.8, -0.2}, law2)));
}
