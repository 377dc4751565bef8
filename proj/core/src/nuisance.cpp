// SPDX-License-Identifier: MIT
#include "haarcov/nuisance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace haarcov {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

// Dense per-cell storage guard: reject absurd resolutions before allocating.
constexpr std::int64_t kMaxCells = std::int64_t{1} << 26;

}  // namespace

FittedRegressor fit_regression(const Dataset& data, int fold,
                               ResponseColumn response, DyadicResolution res,
                               WeightMode weight, const Dgp* dgp,
                               const FittedDensity* density) {
  require(res.dim == data.dim, "fit_regression: resolution dimension mismatch");
  require(res.size <= kMaxCells, "fit_regression: resolution too fine to store");
  if (weight == WeightMode::kKnownDensity) {
    require(dgp != nullptr && dgp->known_density.has_value(),
            "fit_regression: known-density weights need the known density");
  }
  if (weight == WeightMode::kEstimatedDensity) {
    require(density != nullptr,
            "fit_regression: estimated-density weights need a fitted density");
    require(density->source_fold != fold,
            "fit_regression: density weight must come from a disjoint fold");
  }

  FittedRegressor fit;
  fit.res = res;
  fit.source_fold = fold;
  fit.weight_mode = weight;
  fit.cell_values.assign(static_cast<std::size_t>(res.size), 0.0);

  const std::vector<double>& resp =
      response == ResponseColumn::kA ? data.as : data.ys;
  std::int64_t n_fold = 0;
  for (std::int64_t i = 0; i < data.n; ++i) {
    if (data.fold_of[static_cast<std::size_t>(i)] != fold) continue;
    ++n_fold;
    const auto x = data.x_row(i);
    double w = 1.0;
    if (weight == WeightMode::kKnownDensity) w = dgp->known_density->eval(x);
    else if (weight == WeightMode::kEstimatedDensity) w = density->eval(x);
    fit.cell_values[static_cast<std::size_t>(cell_index(res, x))] +=
        resp[static_cast<std::size_t>(i)] / w;
  }
  require(n_fold > 0, "fit_regression: empty fold");

  const double scale = static_cast<double>(res.size) / static_cast<double>(n_fold);
  for (double& v : fit.cell_values) v *= scale;
  return fit;
}

DyadicResolution prediction_optimal_k(double alpha, std::int64_t n, int dim,
                                      double c) {
  require(alpha > 0.0, "prediction_optimal_k: alpha must be > 0");
  require(n >= 2, "prediction_optimal_k: n must be >= 2");
  require(dim >= 1, "prediction_optimal_k: dim must be >= 1");
  require(c > 0.0, "prediction_optimal_k: c must be > 0");
  const double d = static_cast<double>(dim);
  const double target =
      c * std::pow(static_cast<double>(n), d / (2.0 * alpha + d));
  return DyadicResolution::nearest(target, dim);
}

FittedDensity fit_density(const Dataset& data, int fold, double gamma, double c,
                          double m1, double m2) {
  require(gamma > 0.0, "fit_density: gamma must be > 0");
  require(c > 0.0, "fit_density: c must be > 0");
  require(0.0 < m1 && m1 <= 1.0 && 1.0 <= m2, "fit_density: need 0 < m1 <= 1 <= m2");

  std::int64_t n_fold = 0;
  for (std::int64_t i = 0; i < data.n; ++i)
    if (data.fold_of[static_cast<std::size_t>(i)] == fold) ++n_fold;
  require(n_fold > 0, "fit_density: empty fold");
  require(n_fold >= 2, "fit_density: need at least two rows");

  const double d = static_cast<double>(data.dim);
  const double nf = static_cast<double>(n_fold);
  const double target = c * std::pow(nf / std::log(nf), d / (2.0 * gamma + d));
  const DyadicResolution res = DyadicResolution::nearest(target, data.dim);
  require(res.size <= kMaxCells, "fit_density: resolution too fine to store");

  FittedDensity fit;
  fit.res = res;
  fit.m1 = m1;
  fit.m2 = m2;
  fit.source_fold = fold;
  fit.raw_cell_values.assign(static_cast<std::size_t>(res.size), 0.0);
  for (std::int64_t i = 0; i < data.n; ++i) {
    if (data.fold_of[static_cast<std::size_t>(i)] != fold) continue;
    fit.raw_cell_values[static_cast<std::size_t>(cell_index(res, data.x_row(i)))] +=
        1.0;
  }
  const double scale = static_cast<double>(res.size) / nf;
  for (double& v : fit.raw_cell_values) v *= scale;

  fit.cell_values = fit.raw_cell_values;
  for (double& v : fit.cell_values) v = std::clamp(v, m1, m2);
  return fit;
}

}  // namespace haarcov
