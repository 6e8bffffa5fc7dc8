#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dwlab {

/// Equispaced sample points origin + i * spacing, i = 0 .. size-1.
struct UniformGrid {
  double origin = 0.0;
  double spacing = 1.0;
  std::size_t size = 0;

  double at(std::size_t i) const noexcept { return origin + static_cast<double>(i) * spacing; }
  double front() const noexcept { return origin; }
  double back() const noexcept { return at(size - 1); }
  std::vector<double> points() const;

  /// Index i with at(i) == x to within 1e-9 spacing, if any.
  bool aligned_index(double x, std::size_t& index) const noexcept;
};

/// Nodes lo, lo+h, ..., hi; (hi-lo)/h must be an integer (to 1e-9 relative).
UniformGrid node_grid(double lo, double hi, double spacing);

/// Cell centres of the partition of [lo, hi] into cells of width h.
UniformGrid cell_grid(double lo, double hi, double spacing);

/// Piecewise-linear interpolation of samples on `grid` at x. Outside the
/// sampled range the nearest end value is returned.
double interpolate_linear(const UniformGrid& grid, std::span<const double> values, double x);

/// Midpoint rule: sum of values times spacing.
double midpoint_sum(const UniformGrid& grid, std::span<const double> values);

}  // namespace dwlab
