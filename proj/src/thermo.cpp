#include "dwlab/thermo.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

constexpr double kSeriesCutoff = 0.1;

// (1+s)^p - 1 - p s as a binomial series, for |s| < kSeriesCutoff.
double binomial_tail(double p, double s) {
  double coeff = p * (p - 1.0) / 2.0;
  double power = s * s;
  double sum = 0.0;
  for (int j = 2; j < 60; ++j) {
    const double term = coeff * power;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    coeff *= (p - j) / (j + 1.0);
    power *= s;
  }
  return sum;
}

// (1+s) log(1+s) - s, for |s| < kSeriesCutoff.
double xlogx_tail(double s) {
  double sum = 0.0;
  double power = s * s;
  for (int j = 2; j < 60; ++j) {
    const double term = ((j % 2 == 0) ? 1.0 : -1.0) * power / (j * (j - 1.0));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    power *= s;
  }
  return sum;
}

// s - log(1+s), for |s| < kSeriesCutoff.
double log_tail(double s) {
  double sum = 0.0;
  double power = s * s;
  for (int j = 2; j < 60; ++j) {
    const double term = ((j % 2 == 0) ? 1.0 : -1.0) * power / j;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    power *= s;
  }
  return sum;
}

void require_nonnegative(double z, const char* what) {
  if (!(z >= 0.0)) throw DomainError(std::string(what) + " must be nonnegative");
}

}  // namespace

PressureLaw::PressureLaw(double k, double gamma) : k_(k), gamma_(gamma) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("pressure coefficient k must be positive");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw DomainError("adiabatic exponent gamma must be >= 1");
}

double PressureLaw::p(double z) const {
  require_nonnegative(z, "density");
  if (gamma_ == 2.0) return k_ * z * z;
  if (gamma_ == 1.0) return k_ * z;
  return k_ * std::pow(z, gamma_);
}

double PressureLaw::dp(double z) const {
  require_nonnegative(z, "density");
  if (isothermal()) return k_;
  if (gamma_ == 2.0) return 2.0 * k_ * z;
  return k_ * gamma_ * std::pow(z, gamma_ - 1.0);
}

double PressureLaw::dh(double z) const {
  require_nonnegative(z, "density");
  if (isothermal()) {
    if (z == 0.0) throw DomainError("h'(0) diverges for gamma = 1");
    return k_ * (std::log(z) + 1.0);
  }
  return k_ * gamma_ / (gamma_ - 1.0) * std::pow(z, gamma_ - 1.0);
}

PressureValue pressure_eval(const PressureLaw& law, double z) {
  return {law.p(z), law.dp(z)};
}

PotentialValue potential_eval(const PressureLaw& law, double z) {
  require_nonnegative(z, "density");
  const double k = law.k();
  const double g = law.gamma();
  if (law.isothermal()) {
    if (z == 0.0) throw DomainError("h'(0) diverges for gamma = 1");
    return {k * z * std::log(z), k * (std::log(z) + 1.0), k / z};
  }
  if (z == 0.0) {
    const double d2h = g < 2.0 ? std::numeric_limits<double>::infinity() : (g == 2.0 ? 2.0 * k : 0.0);
    return {0.0, 0.0, d2h};
  }
  const double zg = std::pow(z, g);
  return {k * zg / (g - 1.0), k * g / (g - 1.0) * zg / z, k * g * zg / (z * z)};
}

RelativeValue relative_quantities(const PressureLaw& law, double rho, double rho_bar) {
  require_nonnegative(rho, "density");
  require_nonnegative(rho_bar, "reference density");
  const double k = law.k();
  const double g = law.gamma();
  if (rho_bar == 0.0) {
    if (law.isothermal()) throw DomainError("relative energy against vacuum requires gamma > 1");
    const double h = k * std::pow(rho, g) / (g - 1.0);
    return {h, law.p(rho)};
  }
  if (rho == rho_bar) return {0.0, 0.0};

  const double s = rho / rho_bar - 1.0;
  if (law.isothermal()) {
    double h_rel;
    if (std::abs(s) < kSeriesCutoff) {
      h_rel = k * rho_bar * xlogx_tail(s);
    } else if (rho == 0.0) {
      h_rel = k * rho_bar;
    } else {
      h_rel = k * (rho * std::log(rho / rho_bar) - rho + rho_bar);
    }
    return {h_rel, 0.0};
  }

  if (std::abs(s) < kSeriesCutoff) {
    const double tail = k * std::pow(rho_bar, g) * binomial_tail(g, s);
    return {tail / (g - 1.0), tail};
  }
  const PotentialValue at = potential_eval(law, rho);
  const PotentialValue ref = potential_eval(law, rho_bar);
  const double h_rel = at.h - ref.h - ref.dh * (rho - rho_bar);
  const double p_rel = law.p(rho) - law.p(rho_bar) - law.dp(rho_bar) * (rho - rho_bar);
  return {h_rel, p_rel};
}

double entropy_generator(double p, double z) {
  if (!(z > 0.0)) throw DomainError("entropy generator requires z > 0");
  const double s = z - 1.0;
  if (p == 1.0) {
    return std::abs(s) < kSeriesCutoff ? xlogx_tail(s) : z * std::log(z) - z + 1.0;
  }
  if (p == 0.0) {
    return std::abs(s) < kSeriesCutoff ? log_tail(s) : z - std::log(z) - 1.0;
  }
  if (std::abs(s) < kSeriesCutoff) return binomial_tail(p, s) / (p * (p - 1.0));
  return (std::pow(z, p) - p * z + p - 1.0) / (p * (p - 1.0));
}

VacuumAdmissibility vacuum_admissible(const PressureLaw& law) {
  // p'(z) z / p(z) = gamma exactly, and the integral of z^(gamma-2) on (0, 1)
  // is finite iff gamma > 1.
  if (law.isothermal()) return {false, std::nullopt};
  return {true, law.gamma()};
}

}  // namespace dwlab
