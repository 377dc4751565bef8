// SPDX-License-Identifier: MIT
//
// Elements of the Haar approximation spaces V_k: piecewise-constant functions
// on the dyadic cells of [0,1]^d, with exact projection, refinement, products
// and L2 pairings (no quadrature error for piecewise-constant operands).
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "haarcov/dyadic.hpp"

namespace haarcov {

// An element of V_k stored as one value per dyadic cell (row-major).
struct PiecewiseConstantFn {
  DyadicResolution res;
  std::vector<double> cell_values;  // size res.size

  double eval(std::span<const double> x) const;

  // Exact integral over [0,1]^d: mean of cell values.
  double integral() const;

  // Exact squared L2 norm: mean of squared cell values.
  double l2_norm_sq() const;
};

// Constant function c as an element of V_k (P3: constants lie in every V_k).
PiecewiseConstantFn constant_fn(const DyadicResolution& res, double value);

// Exact representation of f at a finer level (new_level >= f.res.level).
PiecewiseConstantFn refine(const PiecewiseConstantFn& f, int new_level);

// Exact L2 projection of a piecewise-constant function onto V_k (cell
// averages; exact because integrals of piecewise constants are closed-form).
PiecewiseConstantFn project(const PiecewiseConstantFn& f, const DyadicResolution& res);

// Projection of a generic evaluable function by fixed 16-point composite
// midpoint quadrature per cell per axis (documented as approximate).
// Supported for dim <= 3.
PiecewiseConstantFn project(const std::function<double(std::span<const double>)>& f,
                            const DyadicResolution& res);

// Exact pointwise product (computed at the finer of the two resolutions).
PiecewiseConstantFn multiply(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g);

// Exact L2 pairing: the coarser operand is refined to the finer one first.
double inner_product(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g);

}  // namespace haarcov
