#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dwlab/profile.hpp"
#include "dwlab/scaling.hpp"
#include "dwlab/thermo.hpp"

namespace dwlab {

struct EntropyDensity {
  double eta = 0.0;  // eta(tau; rho, n | rho_bar, n_bar)
  double q = 0.0;    // matching relative flux
};

/// Relative entropy and flux. rho_bar = 0 requires n_bar = 0 and a
/// vacuum-admissible law; quotients 0/0 are read as 0.
EntropyDensity relative_entropy_density(double tau, double rho, double n, double rho_bar, double n_bar,
                                        const PressureLaw& law);

/// Values and first derivatives of a reference pair at one point.
struct RefSample {
  double rho = 0.0;
  double n = 0.0;
  double rho_tau = 0.0;
  double rho_y = 0.0;
  double n_tau = 0.0;
  double n_y = 0.0;
  double pressure_y = 0.0;  // p(rho_bar)_y
};

/// Callables (tau, y) -> value. Missing derivatives are replaced by centred
/// differences with step fd_step.
struct AnalyticPair {
  using Fn = std::function<double(double, double)>;
  Fn rho, n;
  Fn rho_tau, rho_y, n_tau, n_y;
  double fd_step = 1e-3;
};

/// Reference pair (rho_bar, n_bar) for the relative entropy.
class ReferencePair {
 public:
  enum class Kind { constant, smoothed_step, profile, analytic };

  static ReferencePair constant(double rho_bar);
  /// C^1 ramp from rho_minus (y < -radius) to rho_plus (y > radius) with n_bar = 0.
  static ReferencePair smoothed_step(const LimitSpec& limits, double radius = 1.0);
  /// Stationary profile pair; far-field values are used outside its grid.
  static ReferencePair profile(std::shared_ptr<const SimilarityProfile> profile, const LimitSpec& limits);
  static ReferencePair analytic(AnalyticPair pair);

  Kind kind() const noexcept { return kind_; }
  /// True when the pair solves the scaled continuity equation identically,
  /// so that R1 = 0 holds exactly (profile and constant pairs).
  bool continuity_exact() const noexcept { return kind_ == Kind::constant || kind_ == Kind::profile; }
  const SimilarityProfile* profile_data() const noexcept { return profile_.get(); }

  RefSample sample(double tau, double y, const PressureLaw& law) const;

 private:
  Kind kind_ = Kind::constant;
  double value_ = 1.0;
  LimitSpec limits_{};
  double radius_ = 1.0;
  std::shared_ptr<const SimilarityProfile> profile_;
  std::shared_ptr<const AnalyticPair> analytic_;
};

struct TotalEntropy {
  double E = 0.0;
  double D_alpha = 0.0;
  bool edge_flag = false;  // integrand at a window edge exceeds 1e-10
  double edge_value = 0.0;
};

/// Midpoint quadrature of eta and alpha rho |n/rho - n_bar/rho_bar|^2 over the field window.
TotalEntropy total_relative_entropy(const ScaledField& field, const ReferencePair& ref, double alpha,
                                    const PressureLaw& law);

struct Residuals {
  double R1 = 0.0;
  double R2 = 0.0;
  double R = 0.0;  // (n_bar / rho_bar) R1 - R2
};

Residuals reference_residuals(double tau, double y, const RefSample& s, double alpha);

/// (n_bar / rho_bar)_y.
double velocity_gradient(const RefSample& s);

struct XiValues {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi3 = 0.0;
};

XiValues pointwise_error_terms(double tau, double rho, double n, const RefSample& s, const Residuals& r,
                               const PressureLaw& law);

struct ErrorTerms {
  std::vector<double> R1, R2, R, xi1, xi2, xi3;
  double Xi1 = 0.0;
  double Xi2 = 0.0;
  double Xi3 = 0.0;
  double Xi() const noexcept { return Xi1 + Xi2 + Xi3; }
};

/// Residual and error-term fields at tau = field.tau, integrated by the midpoint rule.
ErrorTerms error_terms(const ScaledField& field, const ReferencePair& ref, double alpha, const PressureLaw& law);

struct State {
  double rho = 0.0;
  double n = 0.0;
};

struct ExchangeResidual {
  double absolute = 0.0;
  double scale = 0.0;  // sum of magnitudes of all terms
  double relative() const noexcept { return scale > 0.0 ? absolute / scale : 0.0; }
};

/// eta(U|U1) + eta(U1|U2) - eta(U|U2) minus the closed-form remainder.
ExchangeResidual exchange_identity_residual(double tau, State u, State u1, State u2, const PressureLaw& law);

struct AnalyticField {
  std::function<double(double, double)> rho, n;
};

/// eta_tau - (y/2) eta_y + q_y + alpha n^2 / rho for the (non-relative)
/// entropy pair, by centred differences with step h.
double entropy_identity_residual(const AnalyticField& field, double tau, double y, double alpha,
                                 const PressureLaw& law, double h);

struct XiSample {
  double tau = 0.0;
  double y = 0.0;
  double rho = 0.0;
  double n = 0.0;
};

struct XiBoundReport {
  std::size_t xi1_upper = 0;  // xi1 <= c [-(n/rho)_y]_+ eta
  std::size_t xi1_abs = 0;    // |xi1| <= c |(n/rho)_y| eta
  std::size_t xi2 = 0;
  std::size_t xi3 = 0;
  std::size_t evaluated = 0;
  std::size_t total() const noexcept { return xi1_upper + xi1_abs + xi2 + xi3; }
};

/// Counts violations of the pointwise xi-bounds beyond a 1e-12 relative slack.
XiBoundReport xi_bound_check(const std::vector<XiSample>& samples, const ReferencePair& ref,
                             const PressureLaw& law, double alpha);

/// E0 exp(int_0^tau a) + int_0^tau b(s) exp(int_s^tau a) ds, trapezoid rule on
/// the sample grid; tau must be one of the grid points or inside the grid.
double gronwall_bound(double E0, const std::vector<double>& grid, const std::vector<double>& a,
                      const std::vector<double>& b, double tau);

struct CoercivityConstants {
  double delta = 0.0;
  double M = 0.0;
  double r0 = 0.0;
  double c_low = 0.0;   // h(rho|rb) >= c_low |rho - rb|^2 for rho <= r0
  double c_high = 0.0;  // h(rho|rb) >= c_high |rho - rb|^gamma for rho > r0
  double C_low = 0.0;
  double C_high = 0.0;
};

/// Constants for the two-branch lower bound of eta(tau; rho, n | rb, 0),
/// rb in [delta, M], following the Taylor and Young arguments with r0 = 2M.
CoercivityConstants coercivity_constants(const PressureLaw& law, double delta, double M);

double coercivity_lower_bound(const CoercivityConstants& c, const PressureLaw& law, double tau, double rho,
                              double n, double rho_bar);

/// |q| / ((|n1|/rho1 + |n2|/rho2 + e^{tau/2}) eta); 0 when eta = 0.
double flux_control_ratio(double tau, State u1, State u2, const PressureLaw& law);

}  // namespace dwlab
