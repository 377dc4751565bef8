// SPDX-License-Identifier: MIT
//
// The four covariance-functional estimators: fold layouts, hand values,
// exact decompositions and symmetries, cross-fitting, and density modes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "haarcov/estimator.hpp"
#include "haarcov/model.hpp"
#include "haarcov/nuisance.hpp"
#include "haarcov/piecewise.hpp"
#include "haarcov/rng.hpp"

using namespace haarcov;

namespace {

EstimatorConfig make_config(EstimatorKind kind, SplitScheme scheme, int level1,
                            int level2, int dim = 1) {
  EstimatorConfig c;
  c.kind = kind;
  c.scheme = scheme;
  c.k1 = DyadicResolution::from_level(level1, dim);
  c.k2 = DyadicResolution::from_level(level2, dim);
  return c;
}

Dataset sampled(const Dgp& dgp, std::int64_t total_n, int m,
                std::uint64_t seed, std::uint64_t rep = 0) {
  RngStream rng = RngStream::derive(seed, 0, rep);
  Dataset d = sample(dgp, total_n, rng);
  d.assign_folds(m);
  return d;
}

}  // namespace

TEST_CASE("fold layouts match the role table") {
  using K = EstimatorKind;
  using S = SplitScheme;
  const auto uni = DensityMode::kUniform;
  const auto unk = DensityMode::kUnknown;

  CHECK(fold_layout(K::kInt, S::kDouble, uni).m == 3);
  CHECK(fold_layout(K::kMc, S::kDouble, uni).m == 4);
  CHECK(fold_layout(K::kIf, S::kDouble, uni).m == 3);
  CHECK(fold_layout(K::kInt, S::kSingle, uni).m == 2);
  CHECK(fold_layout(K::kMc, S::kSingle, uni).m == 3);
  CHECK(fold_layout(K::kIf, S::kSingle, uni).m == 2);
  CHECK(fold_layout(K::kNr, S::kSingle, uni).m == 2);
  for (K k : {K::kInt, K::kMc, K::kNr, K::kIf})
    CHECK(fold_layout(k, S::kNone, uni).m == 1);

  // Single-split shares one fit fold; double-split separates the fits.
  const FoldLayout if_single = fold_layout(K::kIf, S::kSingle, uni);
  CHECK(if_single.fold_for(FoldRole::kPFit) == if_single.fold_for(FoldRole::kBFit));
  const FoldLayout if_double = fold_layout(K::kIf, S::kDouble, uni);
  CHECK(if_double.fold_for(FoldRole::kPFit) != if_double.fold_for(FoldRole::kBFit));
  CHECK_FALSE(if_double.has(FoldRole::kAyMean));
  CHECK_THROWS_AS(if_double.fold_for(FoldRole::kAyMean), std::invalid_argument);

  // NR never has a separate-fit variant outside the estimated-density mode.
  CHECK_THROWS_AS(fold_layout(K::kNr, S::kDouble, uni), std::invalid_argument);
  CHECK_THROWS_AS(fold_layout(K::kNr, S::kDouble, DensityMode::kKnownBounded),
                  std::invalid_argument);

  // Estimated-density layouts: extra density folds, separate fits only.
  CHECK(fold_layout(K::kInt, S::kDouble, unk).m == 6);
  CHECK(fold_layout(K::kMc, S::kDouble, unk).m == 6);
  CHECK(fold_layout(K::kNr, S::kDouble, unk).m == 3);
  CHECK(fold_layout(K::kIf, S::kDouble, unk).m == 5);
  CHECK_THROWS_AS(fold_layout(K::kIf, S::kSingle, unk), std::invalid_argument);
  CHECK_THROWS_AS(fold_layout(K::kIf, S::kNone, unk), std::invalid_argument);
  CHECK_THROWS_AS(fold_layout(K::kNr, S::kSingle, unk), std::invalid_argument);
}

TEST_CASE("hand-computed NR value on two one-point folds") {
  Dataset d;
  d.dim = 1;
  d.n = 2;
  d.xs = {0.3, 0.7};
  d.as = {1.0, 1.0};
  d.ys = {2.0, 4.0};
  d.fold_of = {0, 1};  // fold 0 fits b_hat, fold 1 evaluates
  d.fold_count = 2;

  const Dgp dgp = constant_dgp(0.5, 0.5, 0.05);
  const auto config = make_config(EstimatorKind::kNr, SplitScheme::kSingle, 1, 1);
  // b_hat from fold 0 is {4, 0}; the evaluation row gives 1 * (4 - 0) = 4.
  CHECK(estimate(config, d, dgp) == 4.0);
}

TEST_CASE("all-zero responses give exactly zero for every estimator") {
  using K = EstimatorKind;
  using S = SplitScheme;
  const Dgp dgp = constant_dgp(0.5, 0.5, 0.05);
  RngStream rng(5);
  for (K kind : {K::kInt, K::kMc, K::kNr, K::kIf}) {
    for (S scheme : {S::kNone, S::kSingle, S::kDouble}) {
      if (kind == K::kNr && scheme == S::kDouble) continue;
      const int m = fold_layout(kind, scheme, DensityMode::kUniform).m;
      Dataset d = sample(dgp, 16 * m, rng);
      d.assign_folds(m);
      std::fill(d.as.begin(), d.as.end(), 0.0);
      std::fill(d.ys.begin(), d.ys.end(), 0.0);
      const auto config = make_config(kind, scheme, 2, 3);
      CHECK(estimate(config, d, dgp) == 0.0);
    }
  }
}

TEST_CASE("estimators decompose into their displayed pieces") {
  Dgp dgp = worst_case_dgp(0.3, 0.4, 1, 0.1, 8);
  dgp.rho = 0.04;
  dgp.sigma_a = 0.2;
  dgp.sigma_y = 0.2;
  dgp.tau = 0.1;
  validate_budget(dgp);

  const auto res1 = DyadicResolution::from_level(3, 1);
  const auto res2 = DyadicResolution::from_level(2, 1);

  SUBCASE("INT: mean AY minus the exact integral of the fitted product") {
    Dataset d = sampled(dgp, 3 * 64, 3, 901);
    const FoldLayout layout =
        fold_layout(EstimatorKind::kInt, SplitScheme::kDouble, DensityMode::kUniform);
    FittedRegressor p_hat = fit_regression(
        d, layout.fold_for(FoldRole::kPFit), ResponseColumn::kA, res1);
    FittedRegressor b_hat = fit_regression(
        d, layout.fold_for(FoldRole::kBFit), ResponseColumn::kY, res2);
    double mean_ay = 0.0;
    std::int64_t count = 0;
    const int ay_fold = layout.fold_for(FoldRole::kAyMean);
    for (std::int64_t i = 0; i < d.n; ++i) {
      if (d.fold_of[static_cast<std::size_t>(i)] != ay_fold) continue;
      mean_ay += d.as[static_cast<std::size_t>(i)] * d.ys[static_cast<std::size_t>(i)];
      ++count;
    }
    mean_ay /= static_cast<double>(count);
    const double manual =
        mean_ay - multiply(p_hat.as_piecewise(), b_hat.as_piecewise()).integral();
    const auto config = make_config(EstimatorKind::kInt, SplitScheme::kDouble, 3, 2);
    CHECK(estimate(config, d, dgp) == doctest::Approx(manual).epsilon(1e-14));
  }

  SUBCASE("IF: residual-product mean over the evaluation fold") {
    Dataset d = sampled(dgp, 3 * 64, 3, 902);
    const FoldLayout layout =
        fold_layout(EstimatorKind::kIf, SplitScheme::kDouble, DensityMode::kUniform);
    FittedRegressor p_hat = fit_regression(
        d, layout.fold_for(FoldRole::kPFit), ResponseColumn::kA, res1);
    FittedRegressor b_hat = fit_regression(
        d, layout.fold_for(FoldRole::kBFit), ResponseColumn::kY, res2);
    double sum = 0.0;
    std::int64_t count = 0;
    const int eval_fold = layout.fold_for(FoldRole::kIfEval);
    for (std::int64_t i = 0; i < d.n; ++i) {
      if (d.fold_of[static_cast<std::size_t>(i)] != eval_fold) continue;
      const auto x = d.x_row(i);
      sum += (d.as[static_cast<std::size_t>(i)] - p_hat.eval(x)) *
             (d.ys[static_cast<std::size_t>(i)] - b_hat.eval(x));
      ++count;
    }
    const double manual = sum / static_cast<double>(count);
    const auto config = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 3, 2);
    CHECK(estimate(config, d, dgp) == doctest::Approx(manual).epsilon(1e-14));
  }
}

TEST_CASE("row order within folds does not change the estimates") {
  Dgp dgp = worst_case_dgp(0.3, 0.4, 1, 0.1, 8);
  const auto config = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 3, 2);
  Dataset d = sampled(dgp, 3 * 32, 3, 903);
  const double before = estimate(config, d, dgp);

  // Reverse each fold's row block in place (folds are contiguous).
  Dataset r = d;
  const std::int64_t fs = d.fold_size();
  for (int f = 0; f < d.fold_count; ++f) {
    for (std::int64_t i = 0; i < fs / 2; ++i) {
      const std::int64_t lo = f * fs + i, hi = f * fs + fs - 1 - i;
      std::swap(r.xs[static_cast<std::size_t>(lo)], r.xs[static_cast<std::size_t>(hi)]);
      std::swap(r.as[static_cast<std::size_t>(lo)], r.as[static_cast<std::size_t>(hi)]);
      std::swap(r.ys[static_cast<std::size_t>(lo)], r.ys[static_cast<std::size_t>(hi)]);
    }
  }
  CHECK(estimate(config, r, dgp) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("IF is symmetric under exchanging the roles of A and Y") {
  Dgp dgp = worst_case_dgp(0.3, 0.4, 1, 0.1, 8);
  dgp.rho = 0.04;
  dgp.sigma_a = 0.2;
  dgp.sigma_y = 0.2;
  dgp.tau = 0.1;
  validate_budget(dgp);
  Dataset d = sampled(dgp, 3 * 64, 3, 904);

  const auto config = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 3, 2);
  const double direct = estimate(config, d, dgp);

  // Swap responses, swap the fit folds (0 <-> 1), and swap the resolutions.
  Dataset s = d;
  std::swap(s.as, s.ys);
  for (auto& f : s.fold_of)
    if (f == 0) f = 1; else if (f == 1) f = 0;
  const auto swapped = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 2, 3);
  CHECK(estimate(swapped, s, dgp) == direct);
}

TEST_CASE("the NR swap flag equals NR on response-exchanged data") {
  Dgp dgp = worst_case_dgp(0.3, 0.4, 1, 0.1, 8);
  dgp.rho = 0.04;
  dgp.sigma_a = 0.2;
  dgp.sigma_y = 0.2;
  dgp.tau = 0.1;
  validate_budget(dgp);
  Dataset d = sampled(dgp, 2 * 64, 2, 905);

  auto config = make_config(EstimatorKind::kNr, SplitScheme::kSingle, 4, 4);
  config.swap_nr = true;
  const double swapped_flag = estimate(config, d, dgp);

  Dataset s = d;
  std::swap(s.as, s.ys);
  auto plain = make_config(EstimatorKind::kNr, SplitScheme::kSingle, 4, 4);
  CHECK(estimate(plain, s, dgp) == swapped_flag);

  // The flag is NR-specific.
  auto bad = make_config(EstimatorKind::kIf, SplitScheme::kSingle, 4, 4);
  bad.swap_nr = true;
  CHECK_THROWS_AS(estimate(bad, d, dgp), std::invalid_argument);
}

TEST_CASE("cross-fitting averages the cyclic role rotations") {
  Dgp dgp = worst_case_dgp(0.3, 0.4, 1, 0.1, 8);
  dgp.rho = 0.04;
  dgp.sigma_a = 0.2;
  dgp.sigma_y = 0.2;
  dgp.tau = 0.1;
  validate_budget(dgp);
  const auto config = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 3, 2);
  Dataset d = sampled(dgp, 3 * 48, 3, 906);

  // Rotating roles forward equals relabeling data folds backward.
  const int m = 3;
  double sum = 0.0;
  for (int r = 0; r < m; ++r) {
    Dataset relabeled = d;
    for (auto& f : relabeled.fold_of)
      if (f >= 0) f = (f - r + m) % m;
    sum += estimate(config, relabeled, dgp);
  }
  CHECK(cross_fit(config, d, dgp) == doctest::Approx(sum / m).epsilon(1e-15));

  // run_estimator dispatches on the flag.
  EstimatorConfig cf = config;
  cf.cross_fit = true;
  CHECK(run_estimator(cf, d, dgp) == cross_fit(config, d, dgp));
  CHECK(run_estimator(config, d, dgp) == estimate(config, d, dgp));

  auto none = make_config(EstimatorKind::kIf, SplitScheme::kNone, 3, 3);
  Dataset d1 = sampled(dgp, 64, 1, 907);
  CHECK_THROWS_AS(cross_fit(none, d1, dgp), std::invalid_argument);
}

TEST_CASE("cross-fitting reduces Monte-Carlo variance") {
  const Dgp dgp = constant_dgp(0.5, 0.5, 0.05);
  const auto config = make_config(EstimatorKind::kMc, SplitScheme::kSingle, 3, 3);
  EstimatorConfig cf = config;
  cf.cross_fit = true;

  const int reps = 1500;
  double s1 = 0.0, s1sq = 0.0, s2 = 0.0, s2sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    Dataset d = sampled(dgp, 3 * 64, 3, 908, static_cast<std::uint64_t>(r));
    const double single = estimate(config, d, dgp);
    const double averaged = cross_fit(cf, d, dgp);
    s1 += single;
    s1sq += single * single;
    s2 += averaged;
    s2sq += averaged * averaged;
  }
  const double var_single = s1sq / reps - (s1 / reps) * (s1 / reps);
  const double var_cf = s2sq / reps - (s2 / reps) * (s2 / reps);
  CHECK(var_cf < 0.9 * var_single);
}

TEST_CASE("double-split IF is centered at psi on the constant process") {
  const Dgp dgp = constant_dgp(0.5, 0.5, 0.05);
  const auto config = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 3, 3);
  const int reps = 10000;
  const std::int64_t fold_n = 128;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    Dataset d = sampled(dgp, 3 * fold_n, 3, 909, static_cast<std::uint64_t>(r));
    const double v = estimate(config, d, dgp);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sumsq / reps - mean * mean) / reps);
  CHECK(std::abs(mean - 0.05) < 4.0 * se);
}

TEST_CASE("estimated-density mode: separate density folds, near-unbiased IF") {
  Dgp dgp = constant_dgp(0.5, 0.5, 0.05);
  dgp.density_mode = DensityMode::kUnknown;
  dgp.gamma = 1.0;
  validate_budget(dgp);

  auto config = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 4, 4);
  config.density_mode = DensityMode::kUnknown;
  config.gamma = 1.0;

  const int reps = 4000;
  const std::int64_t fold_n = 512;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    Dataset d = sampled(dgp, 5 * fold_n, 5, 910, static_cast<std::uint64_t>(r));
    const double v = estimate(config, d, dgp);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sumsq / reps - mean * mean) / reps);
  // Allowance covers the second-order density-estimation bias at this n.
  CHECK(std::abs(mean - 0.05) < 4.0 * se + 1e-3);

  // The plugged-in-density NR variant runs on its three-fold layout.
  auto nr = make_config(EstimatorKind::kNr, SplitScheme::kDouble, 4, 4);
  nr.density_mode = DensityMode::kUnknown;
  nr.gamma = 1.0;
  Dataset d3 = sampled(dgp, 3 * 256, 3, 911);
  CHECK(std::isfinite(estimate(nr, d3, dgp)));
}

TEST_CASE("configuration guards") {
  const Dgp dgp = constant_dgp(0.5, 0.5, 0.05);
  const auto config = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 3, 3);

  // Fold count must match the layout.
  Dataset wrong = sampled(dgp, 64, 2, 912);
  CHECK_THROWS_AS(estimate(config, wrong, dgp), std::invalid_argument);

  // Estimator and process density modes must agree.
  auto unk = config;
  unk.density_mode = DensityMode::kUnknown;
  unk.gamma = 1.0;
  Dataset d = sampled(dgp, 3 * 32, 3, 913);
  CHECK_THROWS_AS(estimate(unk, d, dgp), std::invalid_argument);

  // A declared fold with no rows is rejected.
  Dataset gap = sampled(dgp, 3 * 32, 3, 914);
  for (auto& f : gap.fold_of)
    if (f == 2) f = 1;
  CHECK_THROWS_AS(estimate(config, gap, dgp), std::invalid_argument);

  // Resolution dimension must match the data.
  auto wrong_dim = make_config(EstimatorKind::kIf, SplitScheme::kDouble, 3, 3, 2);
  CHECK_THROWS_AS(estimate(wrong_dim, d, dgp), std::invalid_argument);
}
