#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dwlab/errors.hpp"
#include "dwlab/profile.hpp"

using namespace dwlab;
using doctest::Approx;

namespace {

const PressureLaw law2(1.0, 2.0);

// Collocation oracle (tests/oracles/profile_oracle.py) on [-8, 8].
constexpr double probe_y[] = {-4, -2, -1, -0.5, 0, 0.5, 1, 2, 4};
constexpr double oracle_12_08[] = {1.188475746395, 1.136044403490, 1.080778353196, 1.045758467692, 1.007274140910,
                                   0.967276244821, 0.928220789629, 0.862757936620, 0.806428675792};
constexpr double oracle_105_095[] = {1.047569920568, 1.034100986232, 1.019422365259,
                                     1.010274679254, 1.000455410695, 0.990539827101,
                                     0.981137146572, 0.965824713266, 0.952110311296};

double at(const SimilarityProfile& p, double y) { return interpolate_linear(p.grid, p.rho, y); }

}  // namespace

TEST_CASE("constant profile") {
  for (double alpha : {0.0, 1.0, 3.0}) {
    const auto p = solve_profile({1.0, 1.0, alpha}, law2, 8.0, 0.05);
    for (std::size_t i = 0; i < p.rho.size(); ++i) {
      CHECK(p.rho[i] == 1.0);
      CHECK(p.n[i] == 0.0);
    }
    CHECK(p.theta == 0.0);
    CHECK(p.mu == 0.0);
    CHECK(p.K == 0.0);
  }
}

TEST_CASE("jump profile matches the collocation oracle") {
  const LimitSpec lim{1.2, 0.8, 1.0};
  const auto p = solve_profile(lim, law2, 8.0, 0.01);
  CHECK(p.rho.front() == 1.2);
  CHECK(p.rho.back() == 0.8);
  CHECK(std::is_sorted(p.rho.rbegin(), p.rho.rend()));
  const double mid = at(p, 0.0);
  CHECK(mid > 0.8);
  CHECK(mid < 1.2);
  for (std::size_t i = 0; i < std::size(probe_y); ++i) CHECK(std::abs(at(p, probe_y[i]) - oracle_12_08[i]) < 1e-6);
  CHECK(p.theta == Approx(0.11233992).epsilon(1e-4));
  CHECK(p.mu == Approx(0.16130758).epsilon(1e-4));
  CHECK(p.K == Approx(0.38425833).epsilon(1e-4));
  CHECK(darcy_residual(p, law2, lim) <= 1e-8);
}

TEST_CASE("small jump profile and flatness") {
  const LimitSpec lim{1.05, 0.95, 1.0};
  const auto p = solve_profile(lim, law2, 8.0, 0.01);
  for (std::size_t i = 0; i < std::size(probe_y); ++i)
    CHECK(std::abs(at(p, probe_y[i]) - oracle_105_095[i]) < 1e-6);
  CHECK(p.theta < 0.5);
  CHECK(p.theta == Approx(0.02501488).epsilon(1e-3));
  CHECK(p.mu == Approx(0.03992296).epsilon(1e-3));
  CHECK(p.K == Approx(0.09664836).epsilon(1e-3));
}

TEST_CASE("alpha scaling of the profile") {
  const LimitSpec l1{1.2, 0.8, 1.0}, l4{1.2, 0.8, 4.0};
  const auto p1 = solve_profile(l1, law2, 16.0, 0.005);
  const auto p4 = solve_profile(l4, law2, 8.0, 0.0025);
  double err = 0.0;
  for (std::size_t i = 0; i < p4.grid.size; ++i) err = std::max(err, std::abs(p4.rho[i] - at(p1, 2.0 * p4.grid.at(i))));
  CHECK(err <= 1e-6);
  CHECK(p4.theta == Approx(p1.theta).epsilon(1e-2));
  CHECK(p4.mu * 2.0 == Approx(p1.mu).epsilon(2e-2));
  CHECK(p4.K * 4.0 == Approx(p1.K).epsilon(2e-2));
}

TEST_CASE("second-order convergence of the ODE residual") {
  const LimitSpec lim{1.2, 0.8, 1.0};
  double prev = 0.0;
  for (double dy : {0.04, 0.02, 0.01}) {
    const auto p = solve_profile(lim, law2, 8.0, dy);
    double r = 0.0;
    for (double v : p.ode_residual) r = std::max(r, std::abs(v));
    if (prev > 0.0) CHECK(prev / r == Approx(4.0).epsilon(0.25));
    prev = r;
  }
}

TEST_CASE("profile_constants") {
  const LimitSpec lim{1.0, 1.0, 1.0};
  const UniformGrid g = node_grid(-2.0, 2.0, 0.01);
  std::vector<double> rho(g.size, 1.0);
  auto c = profile_constants(make_profile(g, rho, law2, lim), law2, lim);
  CHECK(c.theta == 0.0);
  CHECK(c.mu == 0.0);
  CHECK(c.K == 0.0);
  for (double r : c.r_star) CHECK(r == 0.0);

  // h'(rho) = 2 rho = 1 + y^2 has second derivative 2; theta = max{2, 1} * 2
  const LimitSpec lim2{2.5, 2.5, 1.0};
  for (std::size_t i = 0; i < g.size; ++i) rho[i] = 0.5 * (1.0 + g.at(i) * g.at(i));
  c = profile_constants(make_profile(g, rho, law2, lim2), law2, lim2);
  CHECK(c.theta == Approx(4.0).epsilon(1e-6));

  rho.assign(g.size, 1.0);
  rho[3] = 0.0;
  CHECK_THROWS_AS(make_profile(g, rho, law2, lim), DomainError);
}

TEST_CASE("decay_fit") {
  const LimitSpec lim{1.2, 0.8, 1.0};
  const UniformGrid g = node_grid(-8.0, 8.0, 0.01);
  std::vector<double> rho(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    const double y = g.at(i), d = 0.2 * std::exp(-0.25 * y * y);
    rho[i] = y < 0.0 ? 1.2 - d : 0.8 + d;
  }
  const auto fit = decay_fit(make_profile(g, rho, law2, lim), lim);
  CHECK(fit.ok);
  CHECK(fit.c == Approx(0.25).epsilon(4e-3));
  CHECK(fit.C * 0.4 == Approx(0.2).epsilon(1e-6));

  const auto flat = solve_profile({1.0, 1.0, 1.0}, law2, 8.0, 0.05);
  CHECK_THROWS_AS(decay_fit(flat, {1.0, 1.0, 1.0}), DegenerateFit);

  const auto p = solve_profile({1.05, 0.95, 1.0}, law2, 8.0, 0.01);
  const auto f = decay_fit(p, {1.05, 0.95, 1.0});
  CHECK(f.ok);
  CHECK(f.c > 0.0);
}

TEST_CASE("check_tail flags short domains") {
  const LimitSpec lim{1.05, 0.95, 1.0};
  CHECK_THROWS_AS(check_tail(solve_profile(lim, law2, 3.0, 0.01), lim), DomainError);
  CHECK_NOTHROW(check_tail(solve_profile(lim, law2, 16.0, 0.02), lim));
}

TEST_CASE("profile errors") {
  CHECK_THROWS_AS(solve_profile({-1.0, 1.0, 1.0}, law2, 8.0, 0.01), DomainError);
  CHECK_THROWS_AS(solve_profile({1.2, 0.8, 0.0}, law2, 8.0, 0.01), DomainError);
  CHECK_THROWS_AS(solve_profile({1.2, 0.8, 1.0}, law2, 8.0, 0.0), DomainError);
  ProfileOptions tight;
  tight.max_iterations = 1;
  tight.tolerance = 1e-16;
  CHECK_THROWS_AS(solve_profile({1.2, 0.8, 1.0}, law2, 8.0, 0.01, tight), SolverFailure);
}
