#include <doctest.h>

#include <cmath>
#include <random>

#include "dwlab/errors.hpp"
#include "dwlab/thermo.hpp"

using namespace dwlab;
using doctest::Approx;

TEST_CASE("pressure_eval examples") {
  auto v = pressure_eval(PressureLaw(1, 2), 2.0);
  CHECK(v.p == Approx(4));
  CHECK(v.dp == Approx(4));
  v = pressure_eval(PressureLaw(3, 1), 5.0);
  CHECK(v.p == Approx(15));
  CHECK(v.dp == Approx(3));
  v = pressure_eval(PressureLaw(1, 2), 0.0);
  CHECK(v.p == 0.0);
  CHECK(v.dp == 0.0);
  CHECK_THROWS_AS(pressure_eval(PressureLaw(1, 2), -1.0), DomainError);
}

TEST_CASE("invalid laws are rejected") {
  CHECK_THROWS_AS(PressureLaw(0, 2), DomainError);
  CHECK_THROWS_AS(PressureLaw(1, 0.5), DomainError);
}

TEST_CASE("potential_eval examples") {
  auto v = potential_eval(PressureLaw(1, 2), 2.0);
  CHECK(v.h == Approx(4));
  CHECK(v.dh == Approx(4));
  CHECK(v.d2h == Approx(2));

  const double e = std::exp(1.0);
  v = potential_eval(PressureLaw(1, 1), e);
  CHECK(v.h == Approx(e));
  CHECK(v.dh == Approx(2));
  CHECK(v.d2h == Approx(1 / e));

  v = potential_eval(PressureLaw(2, 3), 1.0);
  CHECK(v.h == Approx(1));
  CHECK(v.dh == Approx(3));
  CHECK(v.d2h == Approx(6));

  CHECK_THROWS_AS(potential_eval(PressureLaw(1, 2), -0.1), DomainError);
  CHECK_THROWS_AS(potential_eval(PressureLaw(1, 1), 0.0), DomainError);
  CHECK(std::isinf(potential_eval(PressureLaw(1, 1.5), 0.0).d2h));
}

TEST_CASE("relative_quantities examples") {
  auto r = relative_quantities(PressureLaw(1, 2), 3.0, 1.0);
  CHECK(r.h_rel == Approx(4));
  CHECK(r.p_rel == Approx(4));

  for (double g : {1.0, 1.4, 2.0, 3.0}) {
    r = relative_quantities(PressureLaw(1.3, g), 0.7, 0.7);
    CHECK(r.h_rel == 0.0);
    CHECK(r.p_rel == 0.0);
  }

  r = relative_quantities(PressureLaw(1, 1), std::exp(1.0), 1.0);
  CHECK(r.h_rel == Approx(1));
  CHECK(std::abs(r.p_rel) < 1e-14);

  CHECK_THROWS_AS(relative_quantities(PressureLaw(1, 1), 1.0, 0.0), DomainError);
  // vacuum reference for gamma > 1 is h(rho)
  r = relative_quantities(PressureLaw(1, 2), 2.0, 0.0);
  CHECK(r.h_rel == Approx(4));
}

TEST_CASE("entropy_generator examples") {
  CHECK(entropy_generator(2, 3) == Approx(2));
  CHECK(entropy_generator(1, 1) == 0.0);
  CHECK(entropy_generator(0.5, 4) == Approx(2));
  CHECK(entropy_generator(0.5, 9) == Approx(2 * 4));
  CHECK(entropy_generator(1, std::exp(1.0)) == Approx(1));  // z log z - z + 1
  CHECK(entropy_generator(0, std::exp(1.0)) == Approx(std::exp(1.0) - 2));  // z - 1 - log z
  CHECK_THROWS_AS(entropy_generator(2, 0.0), DomainError);
  CHECK_THROWS_AS(entropy_generator(2, -1.0), DomainError);
}

TEST_CASE("vacuum_admissible examples") {
  auto v = vacuum_admissible(PressureLaw(1, 2));
  CHECK(v.ok);
  REQUIRE(v.c);
  CHECK(*v.c == Approx(2));
  v = vacuum_admissible(PressureLaw(1, 1));
  CHECK_FALSE(v.ok);
  CHECK_FALSE(v.c);
  v = vacuum_admissible(PressureLaw(1, 1.5));
  CHECK(v.ok);
  CHECK(*v.c == Approx(1.5));
}

TEST_CASE("thermodynamic identities on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> gam(1.0, 4.0), kk(0.1, 5.0), zz(0.01, 10.0);
  for (int i = 0; i < 20000; ++i) {
    const PressureLaw law(kk(rng), i % 10 == 0 ? 1.0 : gam(rng));
    const double z = zz(rng), zb = zz(rng);
    const auto pv = pressure_eval(law, z);
    const auto hv = potential_eval(law, z);
    CHECK(std::abs(z * hv.dh - hv.h - pv.p) <= 1e-12 * (std::abs(z * hv.dh) + std::abs(hv.h) + pv.p));
    CHECK(std::abs(hv.d2h - pv.dp / z) <= 1e-12 * hv.d2h);
    const auto r = relative_quantities(law, z, zb);
    CHECK(r.h_rel >= 0.0);
    CHECK(std::abs(r.p_rel - (law.gamma() - 1) * r.h_rel) <= 1e-12 * std::max(r.p_rel, r.h_rel) + 1e-300);
  }
}
