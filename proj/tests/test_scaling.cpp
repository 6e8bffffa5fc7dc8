#include <doctest.h>

#include <cmath>

#include "dwlab/errors.hpp"
#include "dwlab/scaling.hpp"

using namespace dwlab;
using doctest::Approx;

namespace {

PhysicalState gaussian_state(double t, double X, double dx) {
  PhysicalState s;
  s.t = t;
  s.x = cell_grid(-X, X, dx);
  for (std::size_t i = 0; i < s.x.size; ++i) {
    const double x = s.x.at(i);
    s.rho.push_back(1.0 + 0.5 * std::exp(-x * x / 4.0));
    s.m.push_back(0.5 + 0.1 * x * std::exp(-x * x / 4.0));
  }
  return s;
}

}  // namespace

TEST_CASE("time maps") {
  CHECK(tau_of_time(3.0) == Approx(std::log(4.0)));
  CHECK(tau_of_time(0.0) == 0.0);
  CHECK(time_of_tau(std::log(4.0)) == Approx(3.0));
  CHECK(time_of_tau(tau_of_time(1e-9)) == Approx(1e-9).epsilon(1e-12));
  CHECK_THROWS_AS(tau_of_time(-1.0), DomainError);
}

TEST_CASE("to_scaled at t = 3") {
  PhysicalState s;
  s.t = 3.0;
  s.x = node_grid(-10.0, 10.0, 1.0);
  for (std::size_t i = 0; i < s.x.size; ++i) {
    s.rho.push_back(1.0 + 0.01 * s.x.at(i));
    s.m.push_back(0.5);
  }
  const UniformGrid y = node_grid(-2.0, 2.0, 1.0);
  const ScaledField f = to_scaled(s, y);
  CHECK(f.tau == Approx(std::log(4.0)));
  // y = 2 samples x = 4
  CHECK(f.rho.back() == Approx(1.04));
  for (double n : f.n) CHECK(n == Approx(1.0));

  const PhysicalState back = from_scaled(f, node_grid(-4.0, 4.0, 1.0));
  for (double m : back.m) CHECK(m == Approx(0.5));
}

TEST_CASE("identity at t = 0") {
  const PhysicalState s = gaussian_state(0.0, 6.0, 0.1);
  const ScaledField f = to_scaled(s, s.x);
  CHECK(f.tau == 0.0);
  for (std::size_t i = 0; i < s.x.size; ++i) {
    CHECK(f.rho[i] == Approx(s.rho[i]).epsilon(1e-14));
    CHECK(f.n[i] == Approx(s.m[i]).epsilon(1e-14));
  }
  const PhysicalState back = from_scaled(f, s.x);
  for (std::size_t i = 0; i < s.x.size; ++i) CHECK(back.rho[i] == Approx(s.rho[i]).epsilon(1e-14));
}

TEST_CASE("round trip and mass consistency") {
  const double t = 1.5, s_f = std::sqrt(1.0 + t);
  const PhysicalState s = gaussian_state(t, 40.0, 0.01);
  const UniformGrid y = cell_grid(-12.0, 12.0, 0.01);
  const ScaledField f = to_scaled(s, y);
  // Scaled mass relative to the far field equals physical mass relative to it over the window / sqrt(1+t).
  double phys = 0.0;
  for (std::size_t i = 0; i < s.x.size; ++i) phys += (s.rho[i] - 1.0) * s.dx();
  double scaled = 0.0;
  for (std::size_t i = 0; i < y.size; ++i) scaled += (f.rho[i] - 1.0) * y.spacing;
  CHECK(scaled * s_f == Approx(phys).epsilon(1e-4));

  const PhysicalState back = from_scaled(f, cell_grid(-10.0, 10.0, 0.05));
  double err = 0.0;
  for (std::size_t i = 0; i < back.x.size; ++i) {
    const double x = back.x.at(i);
    err = std::max(err, std::abs(back.rho[i] - (1.0 + 0.5 * std::exp(-x * x / 4.0))));
  }
  CHECK(err < 1e-4);
}

TEST_CASE("window checks") {
  const PhysicalState s = gaussian_state(3.0, 6.0, 0.1);
  CHECK_THROWS_AS(to_scaled(s, cell_grid(-4.0, 4.0, 0.1)), DomainError);
  CHECK_NOTHROW(to_scaled(s, cell_grid(-2.9, 2.9, 0.1)));
  const ScaledField f = to_scaled(s, cell_grid(-2.0, 2.0, 0.1));
  CHECK_THROWS_AS(from_scaled(f, cell_grid(-10.0, 10.0, 0.1)), DomainError);
}
