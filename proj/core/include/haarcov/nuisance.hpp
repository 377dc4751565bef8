// SPDX-License-Identifier: MIT
//
// Fold-local approximate wavelet projection estimators of the regression
// functions p(x) = E[A|X=x], b(x) = E[Y|X=x], and the bounded projection
// density estimator used for inverse-density weighting:
//
//   p_hat(x) = (1/n_fold) * sum_{i in fold} resp_i * K_{V_k}(X_i, x) / w(X_i)
//
// with w == 1 (uniform design), w == f (known density), or w == f_hat
// (estimated density, fitted on a disjoint fold). With the Haar kernel this
// is a one-pass bucket sum per dyadic cell -- no design matrix, no
// regularization; empty cells hold 0 and k may exceed n_fold.
#pragma once

#include <cstdint>
#include <vector>

#include "haarcov/dyadic.hpp"
#include "haarcov/model.hpp"
#include "haarcov/piecewise.hpp"

namespace haarcov {

enum class WeightMode {
  kUniform,           // w(x) == 1
  kKnownDensity,      // w(x) == f(x), the known design density
  kEstimatedDensity,  // w(x) == f_hat(x), a FittedDensity from another fold
};

// Bounded projection density estimate, clamped into [m1, m2] cell-wise.
struct FittedDensity {
  DyadicResolution res;
  std::vector<double> cell_values;      // clamped
  std::vector<double> raw_cell_values;  // before clamping (mean is exactly 1)
  double m1 = 0.1;
  double m2 = 10.0;
  int source_fold = -1;

  double eval(std::span<const double> x) const {
    return cell_values[static_cast<std::size_t>(cell_index(res, x))];
  }
};

// Piecewise-constant fitted regressor: one value per dyadic cell. With a
// uniform design, cellValue == k * (sum of responses with X in the cell) /
// n_fold.
struct FittedRegressor {
  DyadicResolution res;
  std::vector<double> cell_values;
  int source_fold = -1;
  WeightMode weight_mode = WeightMode::kUniform;

  double eval(std::span<const double> x) const {
    return cell_values[static_cast<std::size_t>(cell_index(res, x))];
  }
  // View as an exactly integrable piecewise-constant function.
  PiecewiseConstantFn as_piecewise() const { return {res, cell_values}; }
};

enum class ResponseColumn { kA, kY };

// Fits the projection regressor on the rows of `data` whose fold id equals
// `fold`. Throws std::invalid_argument when the fold is empty, the
// resolution dimension mismatches, or an estimated-density weight references
// a density fitted on the same fold (disjoint-fold requirement). `dgp` is
// required for kKnownDensity (its known_density supplies w); `density` is
// required for kEstimatedDensity.
FittedRegressor fit_regression(const Dataset& data, int fold,
                               ResponseColumn response, DyadicResolution res,
                               WeightMode weight = WeightMode::kUniform,
                               const Dgp* dgp = nullptr,
                               const FittedDensity* density = nullptr);

// Prediction-optimal resolution: nearest dyadic size to c * n^{d/(2*alpha+d)}.
DyadicResolution prediction_optimal_k(double alpha, std::int64_t n, int dim,
                                      double c = 1.0);

// Projection density estimate at the nearest dyadic size to
// c * (n / log n)^{d/(2*gamma+d)}, clamped cell-wise into [m1, m2].
FittedDensity fit_density(const Dataset& data, int fold, double gamma,
                          double c = 1.0, double m1 = 0.1, double m2 = 10.0);

}  // namespace haarcov
