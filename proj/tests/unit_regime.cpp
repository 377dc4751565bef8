// SPDX-License-Identifier: MIT
//
// The rate-regime formula layer: minimax exponents, per-combination best
// rates and achievability, resolution rules, tuning flags, and the
// density-smoothness threshold.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "haarcov/regime.hpp"

using namespace haarcov;

using K = EstimatorKind;
using S = SplitScheme;

TEST_CASE("minimax exponent: closed-form values and monotonicity") {
  // Smooth branch: parametric rate.
  CHECK(minimax_rate_exponent(0.5, 0.5, 1) == 1.0);
  // Rough branch: 4(alpha+beta)/(2 alpha + 2 beta + d) = 0.8/1.4.
  CHECK(minimax_rate_exponent(0.1, 0.1, 1) ==
        doctest::Approx(4.0 * 0.2 / 1.4).epsilon(1e-15));
  // Boundary (alpha+beta)/2 == d/4 belongs to the smooth branch...
  CHECK(minimax_rate_exponent(1.0, 1.0, 4) == 1.0);
  // ...where the two branch formulas agree exactly (continuity).
  CHECK(4.0 * 2.0 / (2.0 * 2.0 + 4.0) == 1.0);

  // Monotone in each smoothness and in -d.
  double prev = 0.0;
  for (double a : {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
    const double e = minimax_rate_exponent(a, 0.3, 2);
    CHECK(e >= prev);
    prev = e;
  }
  CHECK(minimax_rate_exponent(0.2, 0.2, 2) <= minimax_rate_exponent(0.2, 0.2, 1));
}

TEST_CASE("density-smoothness threshold") {
  // Nonpositive exactly when the problem is already parametric.
  CHECK(gstar(0.5, 0.5, 1) <= 0.0);
  CHECK(gstar(1.0, 1.0, 4) <= 0.0);
  CHECK(gstar(0.1, 0.1, 1) > 0.0);

  // Equal smoothness (relative gap zero): with r = delta/d,
  //   g* = 2 delta (1 - 4r) / (2 (1 + 4r) - 4 r (1 - 4r)).
  const double delta = 0.1, d = 1.0;
  const double r = delta / d;
  const double expected = 2.0 * delta * (1.0 - 4.0 * r) /
                          (2.0 * (1.0 + 4.0 * r) - 4.0 * r * (1.0 - 4.0 * r));
  CHECK(gstar(0.1, 0.1, 1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("report shape and entry lookup") {
  const RegimeReport report = regime_report(0.3, 0.6, 1, 4096);
  CHECK(report.entries.size() == 11);
  CHECK(report.minimax_exponent == minimax_rate_exponent(0.3, 0.6, 1));
  CHECK_THROWS_AS(report.entry(K::kNr, S::kDouble), std::invalid_argument);
  // Every valid combination appears exactly once.
  for (K k : {K::kInt, K::kMc, K::kNr, K::kIf})
    for (S s : {S::kNone, S::kSingle, S::kDouble}) {
      if (k == K::kNr && s == S::kDouble) continue;
      const auto& e = report.entry(k, s);
      CHECK(e.kind == k);
      CHECK(e.scheme == s);
    }
}

TEST_CASE("achievability per combination") {
  // Rough regime, (alpha+beta)/2 < d/4: only the bias-corrected estimator
  // and the double-split plug-ins with exact undersmoothing reach the rate.
  const RegimeReport rough = regime_report(0.1, 0.1, 1, 4096);
  CHECK(rough.entry(K::kInt, S::kDouble).achievable);
  CHECK(rough.entry(K::kIf, S::kDouble).achievable);
  CHECK(rough.entry(K::kIf, S::kSingle).achievable);
  CHECK(rough.entry(K::kNr, S::kSingle).achievable);
  CHECK_FALSE(rough.entry(K::kMc, S::kDouble).achievable);
  CHECK_FALSE(rough.entry(K::kInt, S::kSingle).achievable);
  CHECK_FALSE(rough.entry(K::kMc, S::kSingle).achievable);
  for (K k : {K::kInt, K::kMc, K::kNr, K::kIf})
    CHECK_FALSE(rough.entry(k, S::kNone).achievable);

  // Best-rate values in the rough regime: minimax 4s/(2s+d), shared-fit
  // plug-ins 2s/(s+d), Monte Carlo double 3s/(s+d) capped at the minimax.
  const double s = 0.2, d = 1.0;
  CHECK(rough.entry(K::kInt, S::kSingle).best_exponent ==
        doctest::Approx(2.0 * s / (s + d)).epsilon(1e-15));
  CHECK(rough.entry(K::kMc, S::kDouble).best_exponent ==
        doctest::Approx(3.0 * s / (s + d)).epsilon(1e-15));
  CHECK(rough.entry(K::kInt, S::kNone).best_exponent ==
        doctest::Approx(2.0 * s / (s + d)).epsilon(1e-15));

  // Smooth regime, (alpha+beta)/2 >= d/2: everything is parametric.
  const RegimeReport smooth = regime_report(0.6, 0.6, 1, 4096);
  for (const auto& e : smooth.entries) {
    CHECK(e.best_exponent == 1.0);
    CHECK(e.achievable);
  }

  // Intermediate band d/4 <= (alpha+beta)/2 < d/2: the shared-fit and
  // no-split variants fall short; separate fits and NR reach the rate.
  const RegimeReport mid = regime_report(0.3, 0.3, 1, 4096);
  CHECK(mid.minimax_exponent == 1.0);
  CHECK(mid.entry(K::kInt, S::kDouble).achievable);
  CHECK(mid.entry(K::kMc, S::kDouble).achievable);
  CHECK(mid.entry(K::kIf, S::kDouble).achievable);
  CHECK(mid.entry(K::kIf, S::kSingle).achievable);
  CHECK(mid.entry(K::kNr, S::kSingle).achievable);
  CHECK_FALSE(mid.entry(K::kInt, S::kSingle).achievable);
  CHECK_FALSE(mid.entry(K::kIf, S::kNone).achievable);
}

TEST_CASE("best exponents are continuous across the branch points") {
  // Evaluate just inside each side of the branch boundary; the jump must
  // vanish as the window shrinks (the formulas agree at the boundary).
  auto gap = [](K k, S s, double boundary_sum, double eps) {
    const double lo = (boundary_sum - eps) / 2.0, hi = (boundary_sum + eps) / 2.0;
    const RegimeReport below = regime_report(lo, lo, 1, 4096);
    const RegimeReport above = regime_report(hi, hi, 1, 4096);
    return std::abs(below.entry(k, s).best_exponent -
                    above.entry(k, s).best_exponent);
  };
  // Double-split branch point at s = d/2; shared-fit at s = d.
  for (double eps : {1e-3, 1e-6}) {
    CHECK(gap(K::kInt, S::kDouble, 0.5, eps) < 10.0 * eps);
    CHECK(gap(K::kMc, S::kDouble, 0.5, eps) < 10.0 * eps);
    CHECK(gap(K::kIf, S::kDouble, 0.5, eps) < 10.0 * eps);
    CHECK(gap(K::kIf, S::kSingle, 0.5, eps) < 10.0 * eps);
    CHECK(gap(K::kNr, S::kSingle, 0.5, eps) < 10.0 * eps);
    CHECK(gap(K::kInt, S::kSingle, 1.0, eps) < 10.0 * eps);
    CHECK(gap(K::kMc, S::kNone, 1.0, eps) < 10.0 * eps);
  }
}

TEST_CASE("concrete resolution rules at sample size n") {
  // Exact-order rough rule for the double-split plug-in: k ~ n^{2d/(2s+d)}.
  // s = 0.2: exponent 2/1.4 = 10/7; n = 4096 = 2^12 -> 2^(120/7) -> floor
  // rounding to the dyadic grid.
  {
    const auto [k1, k2] = minimax_resolution(K::kInt, S::kDouble, 0.1, 0.1, 1, 4096);
    const double target = std::pow(4096.0, 2.0 / 1.4);
    CHECK(k1.size == DyadicResolution::floor_of(target, 1).size);
    CHECK(k1.size == k2.size);
  }
  // Smooth-branch window [d/(2s), 1] at s = 0.5, n = 4096: levels 12..12.
  {
    const auto [k1, k2] = minimax_resolution(K::kInt, S::kDouble, 0.25, 0.25, 1, 4096);
    CHECK(k1.size == 4096);
    CHECK(k2.size == 4096);
  }
  // Shared-fit rough exact order d/(s+d): s = 0.6, n = 4096 -> exponent
  // 1/1.6 = 0.625, level floor(12 * 0.625) = 7 -> k = 128.
  {
    const auto [k1, k2] = minimax_resolution(K::kInt, S::kSingle, 0.3, 0.3, 1, 4096);
    CHECK(k1.size == 128);
    CHECK(k2.size == 128);
    CHECK(k1.size == DyadicResolution::floor_of(std::pow(4096.0, 0.625), 1).size);
  }
  // NR single at s = 1.0 sits on its smooth branch: window [d/(2s), 1] =
  // [0.5, 1] over n = 2^10, levels 5..10, floor midpoint 7 -> k = 128.
  {
    const auto [k1, k2] = minimax_resolution(K::kNr, S::kSingle, 0.5, 0.5, 1, 1024);
    CHECK(k1.size == k2.size);
    CHECK(k1.size == 128);
  }
  // No-split window [d/(2s), 0.5] at s = 1.2, n = 4096: levels ceil(5) ..
  // floor(6), midpoint floor(5.5) -> 2^5 = 32.
  {
    const auto [k1, k2] = minimax_resolution(K::kIf, S::kNone, 0.6, 0.6, 1, 4096);
    CHECK(k1.size == 32);
    CHECK(k2.size == 32);
  }
  CHECK_THROWS_AS(minimax_resolution(K::kNr, S::kDouble, 0.5, 0.5, 1, 1024),
                  std::invalid_argument);
}

TEST_CASE("tuning flags against the prediction-optimal resolutions") {
  // Rough corner: every separate-fit plug-in undersmooths both fits.
  const RegimeReport rough = regime_report(0.1, 0.1, 1, 4096);
  {
    const auto& e = rough.entry(K::kInt, S::kDouble);
    CHECK(e.undersmooth_k1);
    CHECK(e.undersmooth_k2);
    CHECK_FALSE(e.pred_optimal_sufficient);
  }
  {
    const auto& e = rough.entry(K::kIf, S::kDouble);
    CHECK(e.undersmooth_k1);
    CHECK(e.undersmooth_k2);
    CHECK_FALSE(e.pred_optimal_sufficient);
  }
  // Single-split IF in the rough regime under- and over-smooths at once
  // (k1 above, k2 below the prediction-optimal order).
  {
    const auto& e = rough.entry(K::kIf, S::kSingle);
    CHECK(e.undersmooth_k1);
    CHECK(e.oversmooth_k2);
  }

  // Smooth corner: prediction-optimal tuning suffices everywhere.
  const RegimeReport smooth = regime_report(0.7, 0.7, 1, 4096);
  for (const auto& e : smooth.entries) CHECK(e.pred_optimal_sufficient);

  // Asymmetric smoothness: the rougher fit drives the undersmoothing side.
  const RegimeReport asym = regime_report(0.3, 0.6, 1, 4096);
  {
    // Double-split plug-in: k1 carries b's deficit (beta there is fine),
    // undersmooth_k1 tracks beta < d/2 and undersmooth_k2 tracks alpha < d/2.
    const auto& e = asym.entry(K::kInt, S::kDouble);
    CHECK(e.undersmooth_k1 == (0.6 < 0.5));
    CHECK(e.undersmooth_k2 == (0.3 < 0.5));
  }
  {
    const auto& e = asym.entry(K::kIf, S::kDouble);
    CHECK(e.pred_optimal_sufficient == (std::max(0.3, 0.6) >= 0.5));
  }
}
