// SPDX-License-Identifier: MIT
#include "haarcov/dyadic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace haarcov {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

DyadicResolution DyadicResolution::from_level(int level, int dim) {
  require(level >= 0, "DyadicResolution: level must be >= 0");
  require(dim >= 1, "DyadicResolution: dim must be >= 1");
  require(static_cast<std::int64_t>(level) * dim <= 62,
          "DyadicResolution: 2^(level*dim) exceeds int64 range");
  DyadicResolution res;
  res.level = level;
  res.dim = dim;
  res.size = std::int64_t{1} << (static_cast<std::int64_t>(level) * dim);
  return res;
}

DyadicResolution DyadicResolution::nearest(double target_size, int dim) {
  require(target_size > 0.0, "DyadicResolution::nearest: target size must be positive");
  require(dim >= 1, "DyadicResolution::nearest: dim must be >= 1");
  const double level = std::log2(target_size) / dim;
  long j = std::lround(level);
  if (j < 0) j = 0;
  return from_level(static_cast<int>(j), dim);
}

DyadicResolution DyadicResolution::floor_of(double target_size, int dim) {
  require(target_size > 0.0, "DyadicResolution::floor_of: target size must be positive");
  require(dim >= 1, "DyadicResolution::floor_of: dim must be >= 1");
  const double level = std::log2(target_size) / dim;
  // Guard against 2^j landing epsilon-below an integer level (e.g. n exactly
  // dyadic): nudge by one ulp-scale tolerance before flooring.
  long j = static_cast<long>(std::floor(level + 1e-9));
  if (j < 0) j = 0;
  return from_level(static_cast<int>(j), dim);
}

std::int64_t cells_per_axis(const DyadicResolution& res) {
  return std::int64_t{1} << res.level;
}

std::int64_t cell_index(const DyadicResolution& res, std::span<const double> x) {
  if (static_cast<int>(x.size()) != res.dim)
    throw std::domain_error("cell_index: point dimension mismatch");
  const std::int64_t per_axis = cells_per_axis(res);
  std::int64_t index = 0;
  for (int a = 0; a < res.dim; ++a) {
    const double xa = x[a];
    if (!(xa >= 0.0 && xa <= 1.0))
      throw std::domain_error("cell_index: coordinate outside [0,1]");
    std::int64_t c = static_cast<std::int64_t>(xa * static_cast<double>(per_axis));
    if (c >= per_axis) c = per_axis - 1;  // x == 1 falls into the last cell
    index = index * per_axis + c;
  }
  return index;
}

void cell_center(const DyadicResolution& res, std::int64_t index,
                 std::span<double> out) {
  if (static_cast<int>(out.size()) != res.dim)
    throw std::domain_error("cell_center: output dimension mismatch");
  const std::int64_t per_axis = cells_per_axis(res);
  const double width = 1.0 / static_cast<double>(per_axis);
  for (int a = res.dim - 1; a >= 0; --a) {
    const std::int64_t c = index % per_axis;
    index /= per_axis;
    out[a] = (static_cast<double>(c) + 0.5) * width;
  }
}

double kernel_eval(const DyadicResolution& res, std::span<const double> x,
                   std::span<const double> y) {
  const std::int64_t cx = cell_index(res, x);
  const std::int64_t cy = cell_index(res, y);
  return cx == cy ? static_cast<double>(res.size) : 0.0;
}

}  // namespace haarcov
