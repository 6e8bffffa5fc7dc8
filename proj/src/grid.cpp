#include "dwlab/grid.hpp"

#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

namespace {

std::size_t interval_count(double lo, double hi, double spacing) {
  if (!(spacing > 0.0) || !(hi > lo)) throw DomainError("grid needs hi > lo and positive spacing");
  const double ratio = (hi - lo) / spacing;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError("grid length is not an integer multiple of the spacing");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = at(i);
  return out;
}

bool UniformGrid::aligned_index(double x, std::size_t& index) const noexcept {
  const double r = (x - origin) / spacing;
  const double ri = std::round(r);
  if (std::abs(r - ri) > 1e-9 || ri < 0.0 || ri > static_cast<double>(size - 1)) return false;
  index = static_cast<std::size_t>(ri);
  return true;
}

UniformGrid node_grid(double lo, double hi, double spacing) {
  const std::size_t n = interval_count(lo, hi, spacing);
  return {lo, (hi - lo) / static_cast<double>(n), n + 1};
}

UniformGrid cell_grid(double lo, double hi, double spacing) {
  const std::size_t n = interval_count(lo, hi, spacing);
  const double h = (hi - lo) / static_cast<double>(n);
  return {lo + 0.5 * h, h, n};
}

double interpolate_linear(const UniformGrid& grid, std::span<const double> values, double x) {
  if (values.size() != grid.size || grid.size == 0) throw DomainError("sample count does not match grid");
  double r = (x - grid.origin) / grid.spacing;
  if (std::abs(r - std::round(r)) < 1e-9) r = std::round(r);
  if (r <= 0.0) return values.front();
  const double last = static_cast<double>(grid.size - 1);
  if (r >= last) return values.back();
  const double fl = std::floor(r);
  const auto i = static_cast<std::size_t>(fl);
  const double w = r - fl;
  if (w == 0.0) return values[i];
  return (1.0 - w) * values[i] + w * values[i + 1];
}

double midpoint_sum(const UniformGrid& grid, std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * grid.spacing;
}

}  // namespace dwlab
