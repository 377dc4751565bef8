// SPDX-License-Identifier: MIT
//
// Monte-Carlo rate experiments: for each per-fold size n in a grid, run R
// replications of (sample -> fold -> tune -> estimate), reduce to empirical
// bias / variance / MSE, fit log-log slopes, and compare to the regime
// layer's exponents. Replication RNG streams derive from
// (seed, n-index, replication), and reduction is ordered by replication
// index, so results are bit-identical for any thread count.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "haarcov/dyadic.hpp"
#include "haarcov/estimator.hpp"
#include "haarcov/model.hpp"
#include "haarcov/regime.hpp"

namespace haarcov {

enum class TunerRule {
  kFixed,               // use the resolutions in the estimator config
  kPredictionOptimal,   // k1, k2 at the prediction-optimal rates for p, b
  kMinimaxOptimal,      // the regime layer's best-rate rule per (kind, scheme)
};

const char* to_string(TunerRule rule);  // "fixed" | "prediction_optimal" | "minimax"
TunerRule parse_tuner_rule(const std::string& s);

struct ExperimentSpec {
  Dgp dgp;
  EstimatorConfig estimator;
  TunerRule tuner = TunerRule::kFixed;
  double pred_c1 = 1.0;  // constants for the prediction-optimal rule
  double pred_c2 = 1.0;
  std::vector<std::int64_t> n_grid;  // per-fold sizes; total sample is m*n
  int replications = 2000;
  std::uint64_t seed = 0;
  double slope_tolerance = 0.15;
  int threads = 1;
};

// Validates grid monotonicity (strictly increasing, >= 2 points),
// replications >= 100, threads >= 1; throws std::invalid_argument.
void validate(const ExperimentSpec& spec);

struct RatePoint {
  std::int64_t n = 0;  // per-fold size
  double mean_estimate = 0.0;
  double emp_bias = 0.0;
  double emp_variance = 0.0;  // sample variance (R - 1 denominator)
  double emp_mse = 0.0;       // mean squared error about the true value
  double std_error = 0.0;     // sqrt(emp_variance / R)
  DyadicResolution k1, k2;    // resolutions used at this n
};

struct SlopeFit {
  bool valid = false;  // >= 2 usable points entered the fit
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  int points_used = 0;
  std::vector<std::int64_t> floored_ns;  // |bias| below the noise floor
};

struct RateResult {
  ExperimentSpec spec;
  double true_value = 0.0;
  std::vector<RatePoint> points;
  SlopeFit bias_slope;  // |bias| with a 3*stderr floor; floored points excluded
  SlopeFit var_slope;
  SlopeFit mse_slope;
};

// Runs the full experiment. Throws std::runtime_error with diagnostics if
// any replication produces a nonfinite estimate.
RateResult run_experiment(const ExperimentSpec& spec);

// Ordinary least squares of log(value) on log(n). Requires >= 2 points and
// strictly positive values; standard error is 0 for a 2-point fit.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

struct TheoryVerdict {
  double fitted = 0.0;       // fitted MSE slope
  double theoretical = 0.0;  // -bestExponent of the matching regime entry
  double gap = 0.0;          // |fitted - theoretical|
  double tolerance = 0.0;
  bool pass = false;
};

// Compares the fitted MSE slope against the regime layer's best exponent for
// the experiment's (kind, scheme) at the experiment's slope tolerance.
TheoryVerdict compare_to_theory(const RateResult& result, const RegimeReport& report);

}  // namespace haarcov
