#pragma once

#include <span>
#include <vector>

#include "dwlab/grid.hpp"
#include "dwlab/thermo.hpp"

namespace dwlab {

/// Far-field densities rho(-inf) = rho_minus, rho(+inf) = rho_plus and the
/// friction coefficient.
struct LimitSpec {
  double rho_minus = 1.0;
  double rho_plus = 1.0;
  double alpha = 1.0;

  bool coincident() const noexcept { return rho_minus == rho_plus; }
  double jump() const noexcept { return rho_plus - rho_minus; }
  /// Step reference: rho_minus for y < 0, rho_plus for y >= 0.
  double step(double y) const noexcept { return y < 0.0 ? rho_minus : rho_plus; }
  void validate() const;
};

struct ProfileOptions {
  double tolerance = 1e-10;  // max-norm of the discrete ODE residual
  int max_iterations = 100;
};

/// Grid samples of the similarity profile (rho*, n*) and derived fields.
///
/// n* comes from Darcy's law alpha n* = -p(rho*)_y using the centred
/// difference stored in pressure_y. r_star is the stationary momentum
/// residual -y/2 n*_y - n*/2 + (n*^2/rho*)_y.
struct SimilarityProfile {
  UniformGrid grid;
  std::vector<double> rho;
  std::vector<double> rho_y;
  std::vector<double> n;
  std::vector<double> n_y;
  std::vector<double> pressure_y;
  std::vector<double> r_star;
  /// Fourth-order evaluation of (1/alpha) p(rho)_yy + (y/2) rho_y on the
  /// discrete solution; zero in the two nodes next to each end.
  std::vector<double> ode_residual;
  double theta = 0.0;
  double mu = 0.0;
  double K = 0.0;
  double newton_residual = 0.0;
  int newton_iterations = 0;
};

struct ProfileConstants {
  double theta;
  double mu;
  double K;
  std::vector<double> r_star;
};

/// Damped Newton on second-order centred differences over [-L, L] with
/// rho(-L) = rho_minus, rho(L) = rho_plus.
SimilarityProfile solve_profile(const LimitSpec& limits, const PressureLaw& law, double L, double dy,
                                const ProfileOptions& options = {});

/// Fills the Darcy momentum, derivatives, residuals and constants for given
/// density samples (which need not solve the profile equation).
SimilarityProfile make_profile(const UniformGrid& grid, std::vector<double> rho, const PressureLaw& law,
                               const LimitSpec& limits);

ProfileConstants profile_constants(const SimilarityProfile& profile, const PressureLaw& law,
                                   const LimitSpec& limits);

/// Max-norm of the second-order discrete residual at interior nodes.
double discrete_ode_residual(const UniformGrid& grid, std::span<const double> rho, const PressureLaw& law,
                             double alpha);

/// Max-norm of alpha n* + p(rho*)_y at interior nodes.
double darcy_residual(const SimilarityProfile& profile, const PressureLaw& law, const LimitSpec& limits);

struct DecayFit {
  double c = 0.0;  // Gaussian rate, |rho* - step| ~ C |jump| exp(-c alpha y^2)
  double C = 0.0;
  bool ok = false;
  double rms = 0.0;  // rms misfit of the log-deviation
  int samples = 0;
};

/// Least-squares fit of log|rho* - step| against -c alpha y^2 + log(C |jump|)
/// separately on each tail window L/2 <= |y| <= 0.9 L; the slower rate and
/// larger prefactor are reported.
DecayFit decay_fit(const SimilarityProfile& profile, const LimitSpec& limits);

/// C |jump| exp(-c alpha L^2) for the fitted envelope.
double tail_estimate(const DecayFit& fit, const LimitSpec& limits, double L);

/// Throws DomainError when the fitted tail at the domain ends exceeds tol or
/// the fit is unusable.
void check_tail(const SimilarityProfile& profile, const LimitSpec& limits, double tol = 1e-10);

}  // namespace dwlab
