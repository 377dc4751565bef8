// SPDX-License-Identifier: MIT
#include "haarcov/series.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace haarcov {

namespace {

// Sign pattern of the iota-sum of tensor Haar details at one level:
// +(2^d - 1) if x lies in the left half of its level-l cell on every axis,
// -1 otherwise. Coordinates equal to 1 follow the last-cell convention.
// `per_axis` is 2^level, passed in so level loops can advance it by exact
// doubling instead of recomputing it.
double detail_sum_sign(std::span<const double> x, double per_axis, int dim,
                       double all_left_value) {
  for (int a = 0; a < dim; ++a) {
    double c = std::floor(x[a] * per_axis);
    if (c >= per_axis) c = per_axis - 1.0;
    const double frac = x[a] * per_axis - c;
    if (!(frac < 0.5)) return -1.0;
  }
  return all_left_value;  // 2^d - 1
}

}  // namespace

double WaveletSeriesFunction::partial_series(std::span<const double> x,
                                             int lmax_inclusive) const {
  if (static_cast<int>(x.size()) != dim)
    throw std::domain_error("WaveletSeriesFunction: point dimension mismatch");
  for (int a = 0; a < dim; ++a)
    if (!(x[a] >= 0.0 && x[a] <= 1.0))
      throw std::domain_error("WaveletSeriesFunction: coordinate outside [0,1]");
  if (amplitude == 0.0) return 0.0;
  const int ltop = std::min(lmax_inclusive, max_level);
  if (ltop < base_level) return 0.0;
  // Level weights 2^{-l*smoothness} advance by one multiply per level; the
  // accumulated rounding (< #levels ulps) sits far below the 1e-12 agreement
  // thresholds used against the closed-form routes.
  const double step = std::pow(2.0, -smoothness);
  double weight = std::pow(2.0, -static_cast<double>(base_level) * smoothness);
  double per_axis = std::ldexp(1.0, base_level);
  const double all_left_value = std::ldexp(1.0, dim) - 1.0;
  double sum = 0.0;
  for (int l = base_level; l <= ltop; ++l) {
    sum += weight * detail_sum_sign(x, per_axis, dim, all_left_value);
    weight *= step;
    per_axis *= 2.0;  // exact: stays a power of two
  }
  return amplitude * sum;
}

double WaveletSeriesFunction::series_part(std::span<const double> x) const {
  return partial_series(x, max_level);
}

double WaveletSeriesFunction::eval(std::span<const double> x) const {
  return offset + series_part(x);
}

double WaveletSeriesFunction::series_sup() const {
  double s1 = 0.0;
  for (int l = base_level; l <= max_level; ++l)
    s1 += std::pow(2.0, -static_cast<double>(l) * smoothness);
  return amplitude * (std::ldexp(1.0, dim) - 1.0) * s1;
}

double WaveletSeriesFunction::series_inf() const {
  double s1 = 0.0;
  for (int l = base_level; l <= max_level; ++l)
    s1 += std::pow(2.0, -static_cast<double>(l) * smoothness);
  return -amplitude * s1;
}

PiecewiseConstantFn WaveletSeriesFunction::project_exact(
    const DyadicResolution& res) const {
  if (res.dim != dim)
    throw std::invalid_argument("project_exact: dimension mismatch");
  PiecewiseConstantFn out;
  out.res = res;
  out.cell_values.resize(static_cast<std::size_t>(res.size));
  std::vector<double> center(static_cast<std::size_t>(dim));
  // Levels >= res.level integrate to zero over level-j cells; lower levels
  // are constant on them, so the midpoint value is exact.
  const int lmax = res.level - 1;
  for (std::int64_t i = 0; i < res.size; ++i) {
    cell_center(res, i, center);
    out.cell_values[static_cast<std::size_t>(i)] =
        offset + (lmax >= base_level ? partial_series(center, lmax) : 0.0);
  }
  return out;
}

PiecewiseConstantFn WaveletSeriesFunction::to_piecewise() const {
  return project_exact(DyadicResolution::from_level(max_level + 1, dim));
}

}  // namespace haarcov
