#include "dwlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

// Half-width covered by a grid, counting half a spacing beyond the outer samples.
double half_extent(const UniformGrid& g) {
  return std::max(std::abs(g.front()), std::abs(g.back())) + 0.5 * g.spacing;
}

double max_abs(const UniformGrid& g) { return std::max(std::abs(g.front()), std::abs(g.back())); }

}  // namespace

double ScaledField::mass() const { return midpoint_sum(y, rho); }

double tau_of_time(double t) {
  if (!(t > -1.0)) throw DomainError("physical time must exceed -1");
  return std::log1p(t);
}

double time_of_tau(double tau) { return std::expm1(tau); }

ScaledField to_scaled(const PhysicalState& state, const UniformGrid& y_grid) {
  const double s = std::sqrt(1.0 + state.t);
  const double needed = max_abs(y_grid) * s;
  const double available = state.half_width();
  if (needed > available * (1.0 + 1e-12)) {
    throw DomainError("scaled window needs |x| up to " + std::to_string(needed) + " but the physical half-width is " +
                      std::to_string(available));
  }
  ScaledField out;
  out.tau = tau_of_time(state.t);
  out.y = y_grid;
  out.rho.resize(y_grid.size);
  out.n.resize(y_grid.size);
  for (std::size_t i = 0; i < y_grid.size; ++i) {
    const double x = y_grid.at(i) * s;
    const double r = interpolate_linear(state.x, state.rho, x);
    out.rho[i] = r;
    out.n[i] = r > 0.0 ? s * interpolate_linear(state.x, state.m, x) : 0.0;
  }
  return out;
}

PhysicalState from_scaled(const ScaledField& field, const UniformGrid& x_grid) {
  const double t = time_of_tau(field.tau);
  const double s = std::sqrt(1.0 + t);
  const double needed = max_abs(x_grid) / s;
  if (needed > half_extent(field.y) * (1.0 + 1e-12)) {
    throw DomainError("physical window maps to |y| up to " + std::to_string(needed) +
                      " outside the scaled window");
  }
  PhysicalState out;
  out.x = x_grid;
  out.t = t;
  out.rho.resize(x_grid.size);
  out.m.resize(x_grid.size);
  for (std::size_t i = 0; i < x_grid.size; ++i) {
    const double y = x_grid.at(i) / s;
    const double r = interpolate_linear(field.y, field.rho, y);
    out.rho[i] = r;
    out.m[i] = r > 0.0 ? interpolate_linear(field.y, field.n, y) / s : 0.0;
  }
  return out;
}

}  // namespace dwlab
