// SPDX-License-Identifier: MIT
//
// Hölder-ball function synthesis: truncated tensor-product Haar detail series
// with level-l coefficients of magnitude eps * 2^{-l(alpha + d/2)} on every
// detail function, plus an additive offset constant. These are the worst-case
// nuisance functions used by the bias oracles and rate experiments; all their
// projections and norms are available in closed form.
#pragma once

#include <span>

#include "haarcov/piecewise.hpp"

namespace haarcov {

struct WaveletSeriesFunction {
  double smoothness = 0.5;  // alpha > 0 (alpha < regularity S = 1 for Haar)
  double amplitude = 0.0;   // eps >= 0
  int max_level = 12;       // L: series truncated after level L
  int dim = 1;              // d
  int base_level = 0;       // J0 (0 for Haar)
  double offset = 0.0;      // additive constant, lies in every V_k

  // offset + eps * sum_{l=J0}^{L} sum_m sum_iota 2^{-l(alpha+d/2)} Psi^iota_{lm}(x).
  // At any x exactly one m is active per level and the iota-sum collapses to
  // (2^d - 1) when x sits in the left half of its level-l cell along every
  // axis, and to -1 otherwise.
  double eval(std::span<const double> x) const;

  // The detail series alone (eval minus offset).
  double series_part(std::span<const double> x) const;

  // Series evaluated with levels restricted to J0..lmax_inclusive (used by the
  // exact projection; levels >= j integrate to zero over level-j cells).
  double partial_series(std::span<const double> x, int lmax_inclusive) const;

  // Exact bounds of the series part: max = eps(2^d-1) S1, min = -eps S1 with
  // S1 = sum_{l=J0}^{L} 2^{-l alpha}; attained toward the 0 and 1 corners.
  double series_sup() const;
  double series_inf() const;

  // Exact projection onto V_k: constant offset plus partial series evaluated
  // at cell midpoints (closed form; zero quadrature error).
  PiecewiseConstantFn project_exact(const DyadicResolution& res) const;

  // Exact piecewise-constant representation: the full function lives in the
  // level-(L+1) Haar space.
  PiecewiseConstantFn to_piecewise() const;
};

}  // namespace haarcov
