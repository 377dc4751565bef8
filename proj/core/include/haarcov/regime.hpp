// SPDX-License-Identifier: MIT
//
// Pure formula layer: the minimax MSE exponent over the smoothness classes,
// the best attainable exponent per (estimator, splitting scheme), concrete
// resolution rules (exact-order targets and admissible windows resolved by
// the floor-midpoint of the dyadic window), and the tuning flags behind the
// achievability/undersmoothing regime maps. Conventions:
//
//   * exponents are for MSE ~ n^{-e} and resolutions k ~ n^{q};
//   * boundary ties resolve toward the smoother (faster) branch;
//   * where a rule leaves one side free, k1 carries the binding order and
//     k2 takes the window midpoint (documented canonical choice);
//   * NR uses one resolution (reported on both slots); NR has no
//     double-split variant.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haarcov/dyadic.hpp"
#include "haarcov/estimator.hpp"

namespace haarcov {

// Minimax MSE exponent: 1 when (alpha+beta)/2 >= d/4, else
// 4(alpha+beta)/(2 alpha + 2 beta + d).
double minimax_rate_exponent(double alpha, double beta, int dim);

// Density-smoothness threshold g*(alpha, beta) for unknown-density validity:
// configurations require gamma > g*. Nonpositive when (alpha+beta)/2 >= d/4.
double gstar(double alpha, double beta, int dim);

// Symbolic resolution rule: either an exact-order target k ~ n^{exponent}
// or an admissible window n^{lo} <= k <= n^{hi} resolved at its midpoint.
struct ResolutionRule {
  enum class Kind { kExactOrder, kWindow };
  Kind kind = Kind::kExactOrder;
  double exponent = 0.0;  // exact-order target (kind == kExactOrder)
  double lo = 0.0;        // window bounds as exponents of n (kind == kWindow)
  double hi = 0.0;

  std::string describe() const;  // "exact:q" or "window:[lo;hi]"
};

struct EstimatorRegime {
  EstimatorKind kind = EstimatorKind::kIf;
  SplitScheme scheme = SplitScheme::kDouble;
  double best_exponent = 0.0;  // best attainable MSE exponent
  bool achievable = false;     // best_exponent == minimax exponent
  ResolutionRule k1_rule, k2_rule;
  // Tuning flags relative to the prediction-optimal resolutions.
  bool undersmooth_k1 = false;
  bool undersmooth_k2 = false;
  bool oversmooth_k1 = false;
  bool oversmooth_k2 = false;
  bool pred_optimal_sufficient = false;
  // Concrete resolutions at the report's n.
  DyadicResolution k1, k2;
};

struct RegimeReport {
  double alpha = 0.0;
  double beta = 0.0;
  int dim = 1;
  std::int64_t n = 0;
  double minimax_exponent = 0.0;
  std::vector<EstimatorRegime> entries;  // the 11 valid (kind, scheme) pairs

  const EstimatorRegime& entry(EstimatorKind kind, SplitScheme scheme) const;
};

// Full report across every valid (kind, scheme) combination.
RegimeReport regime_report(double alpha, double beta, int dim, std::int64_t n);

// Concrete dyadic pair implementing the combination's best-rate rule at n:
// exact-order targets round down to a dyadic size; windows take the floor
// midpoint of the admissible dyadic level range. Throws for NR + double.
std::pair<DyadicResolution, DyadicResolution> minimax_resolution(
    EstimatorKind kind, SplitScheme scheme, double alpha, double beta, int dim,
    std::int64_t n);

}  // namespace haarcov
