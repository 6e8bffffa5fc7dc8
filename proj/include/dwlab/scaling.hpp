#pragma once

#include <vector>

#include "dwlab/dynamics.hpp"
#include "dwlab/grid.hpp"

namespace dwlab {

/// (rho, n) sampled on a uniform y-grid at scaled time tau, where
/// tau = log(1 + t), y = x / sqrt(1 + t) and n = sqrt(1 + t) m.
struct ScaledField {
  double tau = 0.0;
  UniformGrid y;
  std::vector<double> rho;
  std::vector<double> n;

  double mass() const;
};

double tau_of_time(double t);
double time_of_tau(double tau);

/// Samples a physical snapshot on y_grid by linear interpolation between cell
/// centres. Throws DomainError unless the stretched window fits in [-X, X].
ScaledField to_scaled(const PhysicalState& state, const UniformGrid& y_grid);

/// Inverse map onto x_grid. Throws DomainError unless x / sqrt(1 + t) stays
/// inside the field window.
PhysicalState from_scaled(const ScaledField& field, const UniformGrid& x_grid);

}  // namespace dwlab
