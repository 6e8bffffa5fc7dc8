#pragma once

#include <optional>

namespace dwlab {

/// Barotropic gamma-law p(z) = k z^gamma with k > 0 and gamma >= 1.
///
/// The internal-energy potential h is tied to p through p = z h' - h, so
/// h(z) = k z^gamma / (gamma - 1) for gamma > 1 and h(z) = k z log z for
/// gamma = 1.
class PressureLaw {
 public:
  PressureLaw(double k, double gamma);

  double k() const noexcept { return k_; }
  double gamma() const noexcept { return gamma_; }
  bool isothermal() const noexcept { return gamma_ == 1.0; }

  /// Pressure only; valid for every z >= 0.
  double p(double z) const;
  /// dp/dz; at z = 0 this is k for gamma = 1 and 0 for gamma > 1.
  double dp(double z) const;
  /// h'(z); h'(0) = 0 for gamma > 1, undefined for gamma = 1.
  double dh(double z) const;

 private:
  double k_;
  double gamma_;
};

struct PressureValue {
  double p;
  double dp;
};

struct PotentialValue {
  double h;
  double dh;
  double d2h;  // +inf at z = 0 when 1 < gamma < 2
};

struct RelativeValue {
  double h_rel;  // h(rho | rho_bar)
  double p_rel;  // p(rho | rho_bar)
};

struct VacuumAdmissibility {
  bool ok;
  std::optional<double> c;  // least constant with p'(z) <= c p(z) / z
};

PressureValue pressure_eval(const PressureLaw& law, double z);
PotentialValue potential_eval(const PressureLaw& law, double z);

/// Bregman remainders h(rho) - h(rb) - h'(rb)(rho - rb) and the same for p.
/// Near rho = rb a convergent series replaces the cancelling difference.
RelativeValue relative_quantities(const PressureLaw& law, double rho, double rho_bar);

/// F_p with F_p'' = z^(p-2) and F_p(1) = F_p'(1) = 0.
double entropy_generator(double p, double z);

VacuumAdmissibility vacuum_admissible(const PressureLaw& law);

}  // namespace dwlab
