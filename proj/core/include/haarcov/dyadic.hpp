// SPDX-License-Identifier: MIT
//
// Dyadic multiresolution bookkeeping for the tensor-product Haar basis on
// [0,1]^d: resolution descriptors, cell indexing, and the projection kernel.
#pragma once

#include <cstdint>
#include <span>

namespace haarcov {

// A projection-space size k = 2^{j*d} at dyadic level j in dimension d.
// Regularity S is 1 for Haar (the only basis implemented here).
struct DyadicResolution {
  int level = 0;        // j >= 0
  int dim = 1;          // d >= 1
  std::int64_t size = 1; // k = 2^(level*dim)
  int regularity = 1;   // S (Haar)

  // Construct from a level/dimension pair; validates 2^(j*d) fits in int64.
  static DyadicResolution from_level(int level, int dim);

  // Nearest dyadic resolution to a requested (possibly fractional) size k:
  // j = round(log2(k)/d). Used wherever a rate formula produces a real k.
  static DyadicResolution nearest(double target_size, int dim);

  // Largest dyadic resolution whose size does not exceed the target:
  // j = floor(log2(k)/d). Used by exact-order tuner rules.
  static DyadicResolution floor_of(double target_size, int dim);

  friend bool operator==(const DyadicResolution&, const DyadicResolution&) = default;
};

// Number of cells along each axis at this resolution (2^level).
std::int64_t cells_per_axis(const DyadicResolution& res);

// Row-major index of the dyadic cell containing x. Each coordinate must lie
// in [0,1]; a coordinate equal to 1 belongs to the last cell (left-closed
// cells, right-closed only at the domain boundary). Throws std::domain_error
// if x leaves the unit cube or has the wrong dimension.
std::int64_t cell_index(const DyadicResolution& res, std::span<const double> x);

// Center point of cell `index`, written into `out` (size d).
void cell_center(const DyadicResolution& res, std::int64_t index,
                 std::span<double> out);

// Projection kernel K_{V_k}(x,y) = sum_m Phi_{jm}(x) Phi_{jm}(y). For Haar
// this is k when x and y share a level-j cell and 0 otherwise.
double kernel_eval(const DyadicResolution& res, std::span<const double> x,
                   std::span<const double> y);

}  // namespace haarcov
