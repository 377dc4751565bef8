// SPDX-License-Identifier: MIT
//
// Dyadic resolutions, piecewise-constant calculus, and truncated Haar detail
// series: construction rules, exact projection/quadrature identities, and the
// smoothness-class properties of the series functions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "haarcov/dyadic.hpp"
#include "haarcov/piecewise.hpp"
#include "haarcov/rng.hpp"
#include "haarcov/series.hpp"

using namespace haarcov;

namespace {

double at(const PiecewiseConstantFn& f, double x) { return f.eval({&x, 1}); }

WaveletSeriesFunction rough_series(double alpha, int dim) {
  WaveletSeriesFunction fn;
  fn.smoothness = alpha;
  fn.amplitude = 0.1;
  fn.max_level = 8;
  fn.dim = dim;
  fn.offset = 0.5;
  return fn;
}

}  // namespace

TEST_CASE("resolution construction and rounding") {
  const auto r = DyadicResolution::from_level(3, 2);
  CHECK(r.size == 64);
  CHECK(cells_per_axis(r) == 8);
  CHECK_THROWS_AS(DyadicResolution::from_level(-1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DyadicResolution::from_level(40, 2), std::invalid_argument);

  // nearest: j = round(log2(k)/d); floor_of: j = floor(log2(k)/d).
  CHECK(DyadicResolution::nearest(64.0, 1).size == 64);
  CHECK(DyadicResolution::nearest(48.0, 1).size == 64);    // log2 = 5.58 -> 6
  CHECK(DyadicResolution::nearest(40.0, 1).size == 32);    // log2 = 5.32 -> 5
  CHECK(DyadicResolution::floor_of(63.0, 1).size == 32);
  CHECK(DyadicResolution::floor_of(64.0, 1).size == 64);
  CHECK(DyadicResolution::nearest(60.0, 2).size == 64);    // j = round(2.95) = 3
  CHECK(DyadicResolution::nearest(0.9, 1).size == 1);      // clamped at level 0
}

TEST_CASE("cell indexing, centers, and domain checks") {
  const auto r = DyadicResolution::from_level(3, 2);
  // Row-major over axes; index round-trips through the cell center.
  for (std::int64_t c = 0; c < r.size; ++c) {
    std::array<double, 2> center{};
    cell_center(r, c, center);
    CHECK(cell_index(r, center) == c);
  }
  const std::array<double, 2> edge{1.0, 1.0};  // right edge clamps into the last cell
  CHECK(cell_index(r, edge) == r.size - 1);
  const std::array<double, 2> outside{1.2, 0.5};
  CHECK_THROWS_AS(cell_index(r, outside), std::domain_error);
}

TEST_CASE("projection kernel values") {
  const auto k2 = DyadicResolution::from_level(1, 1);
  const double a = 0.1, b = 0.4, c = 0.6;
  CHECK(kernel_eval(k2, {&a, 1}, {&b, 1}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(kernel_eval(k2, {&a, 1}, {&c, 1}) == 0.0);

  const auto k4d2 = DyadicResolution::from_level(1, 2);
  const std::array<double, 2> x{0.2, 0.2}, y{0.3, 0.4};
  CHECK(kernel_eval(k4d2, x, y) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("projection of hand functions") {
  const auto k2 = DyadicResolution::from_level(1, 1);
  const auto id = project([](std::span<const double> x) { return x[0]; }, k2);
  CHECK(id.cell_values[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(id.cell_values[1] == doctest::Approx(0.75).epsilon(1e-12));

  const auto ones = project(constant_fn(DyadicResolution::from_level(4, 1), 1.0), k2);
  for (double v : ones.cell_values) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("inner products and multiplication are exact") {
  const auto k2 = DyadicResolution::from_level(1, 1);
  PiecewiseConstantFn f{k2, {1.0, 3.0}};
  PiecewiseConstantFn g{k2, {2.0, 0.0}};
  CHECK(inner_product(f, g) == doctest::Approx(1.0).epsilon(1e-15));

  // Coarser side refined before pairing; product integrates exactly.
  const auto fine = refine(g, 4);
  CHECK(inner_product(f, fine) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(multiply(f, fine).integral() == doctest::Approx(1.0).epsilon(1e-15));

  PiecewiseConstantFn wrong_dim{DyadicResolution::from_level(1, 2), {1, 1, 1, 1}};
  CHECK_THROWS_AS(inner_product(f, wrong_dim), std::invalid_argument);
}

TEST_CASE("projection idempotence and nesting (exact)") {
  const auto fine = DyadicResolution::from_level(5, 1);
  const auto mid = DyadicResolution::from_level(3, 1);
  const auto coarse = DyadicResolution::from_level(2, 1);

  PiecewiseConstantFn f{fine, std::vector<double>(static_cast<std::size_t>(fine.size))};
  RngStream rng(11);
  for (auto& v : f.cell_values) v = rng.uniform_pm1();

  const auto once = project(f, mid);
  const auto twice = project(once, mid);
  for (std::int64_t c = 0; c < mid.size; ++c) {
    CHECK(once.cell_values[static_cast<std::size_t>(c)] ==
          doctest::Approx(twice.cell_values[static_cast<std::size_t>(c)]).epsilon(1e-15));
  }
  const auto nested = project(project(f, mid), coarse);
  const auto direct = project(f, coarse);
  for (std::int64_t c = 0; c < coarse.size; ++c) {
    CHECK(nested.cell_values[static_cast<std::size_t>(c)] ==
          doctest::Approx(direct.cell_values[static_cast<std::size_t>(c)]).epsilon(1e-15));
  }
}

TEST_CASE("reproducing identity on the projection space") {
  // For g in V_k, integrating K(x, .) against g returns g(x) exactly.
  const auto k8 = DyadicResolution::from_level(3, 1);
  PiecewiseConstantFn g{k8, {0.2, -1.0, 3.5, 0.0, 1.0, -0.5, 2.0, 0.7}};
  RngStream rng(5);
  for (int t = 0; t < 25; ++t) {
    const double x = rng.uniform01();
    const auto kernel_at_x = project(
        [&](std::span<const double> y) { return kernel_eval(k8, {&x, 1}, y); }, k8);
    CHECK(inner_product(kernel_at_x, g) == doctest::Approx(at(g, x)).epsilon(1e-12));
  }
}

TEST_CASE("series evaluation and sign geometry") {
  // d=1: the level-l detail contributes +1 on the left half of the level-l
  // cell and -1 on the right half, scaled by eps*2^{-l*alpha}.
  WaveletSeriesFunction fn = rough_series(0.5, 1);
  fn.max_level = 2;
  const double eps = fn.amplitude;
  const double x = 0.1;  // left half at levels 0, 1, 2
  const double expected =
      fn.offset + eps * (1.0 + std::pow(2.0, -0.5) + std::pow(2.0, -1.0));
  CHECK(fn.eval({&x, 1}) == doctest::Approx(expected).epsilon(1e-14));

  // x = 0.3: left half of [0,1) at level 0, right half of [0,0.5) at level 1,
  // left half of [0.25,0.5) at level 2.
  const double y = 0.3;
  const double expected_y =
      fn.offset + eps * (1.0 - std::pow(2.0, -0.5) + std::pow(2.0, -1.0));
  CHECK(fn.eval({&y, 1}) == doctest::Approx(expected_y).epsilon(1e-14));

  WaveletSeriesFunction flat = fn;
  flat.amplitude = 0.0;
  const double z = 0.77;
  CHECK(flat.eval({&z, 1}) == flat.offset);
}

TEST_CASE("series bounds are attained") {
  for (int dim : {1, 2}) {
    WaveletSeriesFunction fn = rough_series(0.3, dim);
    double s1 = 0.0;
    for (int l = 0; l <= fn.max_level; ++l) s1 += std::pow(2.0, -l * fn.smoothness);
    const double mass = (std::pow(2.0, dim) - 1.0);
    CHECK(fn.series_sup() == doctest::Approx(fn.amplitude * mass * s1).epsilon(1e-13));
    CHECK(fn.series_inf() == doctest::Approx(-fn.amplitude * s1).epsilon(1e-13));

    // The sup is approached toward the 0 corner, the inf past the midpoint.
    std::vector<double> corner(static_cast<std::size_t>(dim), 1e-9);
    CHECK(fn.series_part(corner) == doctest::Approx(fn.series_sup()).epsilon(1e-12));
    std::vector<double> anti(static_cast<std::size_t>(dim), 1.0 - 1e-9);
    CHECK(fn.series_part(anti) == doctest::Approx(fn.series_inf()).epsilon(1e-12));
  }
}

TEST_CASE("Hoelder tail: sup-norm distance to projection decays like k^{-alpha/d}") {
  for (int dim : {1, 2}) {
    const double alpha = 0.45;
    WaveletSeriesFunction fn = rough_series(alpha, dim);
    fn.max_level = dim == 1 ? 10 : 6;
    const auto full = fn.to_piecewise();
    double prev_ratio = -1.0;
    for (int j = 1; j <= (dim == 1 ? 6 : 3); ++j) {
      const auto res = DyadicResolution::from_level(j, dim);
      const auto proj = refine(fn.project_exact(res), full.res.level);
      double sup = 0.0;
      for (std::size_t c = 0; c < full.cell_values.size(); ++c) {
        sup = std::max(sup, std::abs(full.cell_values[c] - proj.cell_values[c]));
      }
      const double ratio = sup * std::pow(static_cast<double>(res.size), alpha / dim);
      CHECK(ratio > 0.0);
      if (prev_ratio > 0.0) {
        // Bounded ratio across k: within a constant factor, no drift.
        CHECK(ratio < 4.0 * prev_ratio);
        CHECK(ratio > 0.25 * prev_ratio);
      }
      prev_ratio = ratio;
    }
  }
}

TEST_CASE("per-level detail energy matches the coefficient norm") {
  // || proj_{l+1} f - proj_l f ||^2 == (2^d - 1) eps^2 2^{-2 l alpha}.
  for (int dim : {1, 2}) {
    WaveletSeriesFunction fn = rough_series(0.35, dim);
    fn.max_level = dim == 1 ? 8 : 5;
    const double mass = std::pow(2.0, dim) - 1.0;
    for (int l = 0; l < 4; ++l) {
      const auto lo = fn.project_exact(DyadicResolution::from_level(l, dim));
      const auto hi = fn.project_exact(DyadicResolution::from_level(l + 1, dim));
      const auto lo_ref = refine(lo, l + 1);
      PiecewiseConstantFn diff = hi;
      for (std::size_t c = 0; c < diff.cell_values.size(); ++c) {
        diff.cell_values[c] -= lo_ref.cell_values[c];
      }
      const double expected =
          mass * fn.amplitude * fn.amplitude * std::pow(2.0, -2.0 * l * fn.smoothness);
      CHECK(diff.l2_norm_sq() == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact projection agrees with piecewise-representation projection") {
  for (int dim : {1, 2}) {
    WaveletSeriesFunction fn = rough_series(0.25, dim);
    fn.max_level = dim == 1 ? 9 : 5;
    const auto pw = fn.to_piecewise();
    for (int j : {0, 1, 3}) {
      const auto res = DyadicResolution::from_level(j, dim);
      const auto direct = fn.project_exact(res);
      const auto via_pw = project(pw, res);
      for (std::int64_t c = 0; c < res.size; ++c) {
        CHECK(direct.cell_values[static_cast<std::size_t>(c)] ==
              doctest::Approx(via_pw.cell_values[static_cast<std::size_t>(c)])
                  .epsilon(1e-13));
      }
    }
    // Projection at or beyond the truncation level reproduces the function.
    const auto fine = fn.project_exact(pw.res);
    for (std::size_t c = 0; c < fine.cell_values.size(); ++c) {
      CHECK(fine.cell_values[c] == doctest::Approx(pw.cell_values[c]).epsilon(1e-13));
    }
  }
}

TEST_CASE("detail series is orthogonal to constants") {
  WaveletSeriesFunction fn = rough_series(0.5, 1);
  const auto pw = fn.to_piecewise();
  CHECK(pw.integral() == doctest::Approx(fn.offset).epsilon(1e-13));
  // Projection to V_1 of the detail-at-level>=1 part: level-0 coefficient only.
  const auto p0 = fn.project_exact(DyadicResolution::from_level(0, 1));
  CHECK(p0.cell_values[0] == doctest::Approx(fn.offset).epsilon(1e-13));
}
