// SPDX-License-Identifier: MIT
#include "haarcov/piecewise.hpp"

#include <cmath>
#include <stdexcept>

namespace haarcov {

namespace {

// Maps a fine-grid cell index to the index of its ancestor cell at a coarser
// level: per-axis coordinates shift right by the level difference.
std::int64_t coarse_parent_index(std::int64_t fine_index, int fine_level,
                                 int coarse_level, int dim) {
  const int delta = fine_level - coarse_level;
  const std::int64_t fine_per_axis = std::int64_t{1} << fine_level;
  const std::int64_t coarse_per_axis = std::int64_t{1} << coarse_level;
  std::int64_t coarse_index = 0;
  std::int64_t scale = 1;
  // Walk axes from the last (fastest-varying) to the first.
  for (int a = 0; a < dim; ++a) {
    const std::int64_t fine_c = fine_index % fine_per_axis;
    fine_index /= fine_per_axis;
    const std::int64_t coarse_c = fine_c >> delta;
    coarse_index += coarse_c * scale;
    scale *= coarse_per_axis;
  }
  return coarse_index;
}

}  // namespace

double PiecewiseConstantFn::eval(std::span<const double> x) const {
  return cell_values[static_cast<std::size_t>(cell_index(res, x))];
}

double PiecewiseConstantFn::integral() const {
  double sum = 0.0;
  for (double v : cell_values) sum += v;
  return sum / static_cast<double>(res.size);
}

double PiecewiseConstantFn::l2_norm_sq() const {
  double sum = 0.0;
  for (double v : cell_values) sum += v * v;
  return sum / static_cast<double>(res.size);
}

PiecewiseConstantFn constant_fn(const DyadicResolution& res, double value) {
  PiecewiseConstantFn f;
  f.res = res;
  f.cell_values.assign(static_cast<std::size_t>(res.size), value);
  return f;
}

PiecewiseConstantFn refine(const PiecewiseConstantFn& f, int new_level) {
  if (new_level < f.res.level)
    throw std::invalid_argument("refine: new level must be >= current level");
  if (new_level == f.res.level) return f;
  PiecewiseConstantFn out;
  out.res = DyadicResolution::from_level(new_level, f.res.dim);
  out.cell_values.resize(static_cast<std::size_t>(out.res.size));
  for (std::int64_t i = 0; i < out.res.size; ++i) {
    const std::int64_t parent =
        coarse_parent_index(i, new_level, f.res.level, f.res.dim);
    out.cell_values[static_cast<std::size_t>(i)] =
        f.cell_values[static_cast<std::size_t>(parent)];
  }
  return out;
}

PiecewiseConstantFn project(const PiecewiseConstantFn& f, const DyadicResolution& res) {
  if (res.dim != f.res.dim)
    throw std::invalid_argument("project: dimension mismatch");
  if (res.level >= f.res.level) return refine(f, res.level);
  // Coarse cell value = average of its descendants (all equal volume).
  PiecewiseConstantFn out = constant_fn(res, 0.0);
  for (std::int64_t i = 0; i < f.res.size; ++i) {
    const std::int64_t parent =
        coarse_parent_index(i, f.res.level, res.level, res.dim);
    out.cell_values[static_cast<std::size_t>(parent)] +=
        f.cell_values[static_cast<std::size_t>(i)];
  }
  const double children_per_cell =
      static_cast<double>(f.res.size) / static_cast<double>(res.size);
  for (double& v : out.cell_values) v /= children_per_cell;
  return out;
}

PiecewiseConstantFn project(const std::function<double(std::span<const double>)>& f,
                            const DyadicResolution& res) {
  if (res.dim > 3)
    throw std::invalid_argument(
        "project(evaluable): composite midpoint quadrature supported for dim <= 3");
  constexpr int kPointsPerAxis = 16;
  const std::int64_t per_axis = cells_per_axis(res);
  const double cell_width = 1.0 / static_cast<double>(per_axis);
  const double step = cell_width / kPointsPerAxis;

  PiecewiseConstantFn out;
  out.res = res;
  out.cell_values.resize(static_cast<std::size_t>(res.size));

  std::vector<double> x(static_cast<std::size_t>(res.dim));
  std::vector<std::int64_t> coords(static_cast<std::size_t>(res.dim), 0);
  std::int64_t quad_points = 1;
  for (int a = 0; a < res.dim; ++a) quad_points *= kPointsPerAxis;

  for (std::int64_t cell = 0; cell < res.size; ++cell) {
    // Decode row-major cell coordinates.
    std::int64_t rest = cell;
    for (int a = res.dim - 1; a >= 0; --a) {
      coords[static_cast<std::size_t>(a)] = rest % per_axis;
      rest /= per_axis;
    }
    double sum = 0.0;
    for (std::int64_t q = 0; q < quad_points; ++q) {
      std::int64_t qr = q;
      for (int a = res.dim - 1; a >= 0; --a) {
        const std::int64_t qa = qr % kPointsPerAxis;
        qr /= kPointsPerAxis;
        x[static_cast<std::size_t>(a)] =
            static_cast<double>(coords[static_cast<std::size_t>(a)]) * cell_width +
            (static_cast<double>(qa) + 0.5) * step;
      }
      sum += f(x);
    }
    out.cell_values[static_cast<std::size_t>(cell)] =
        sum / static_cast<double>(quad_points);
  }
  return out;
}

PiecewiseConstantFn multiply(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g) {
  if (f.res.dim != g.res.dim)
    throw std::invalid_argument("multiply: dimension mismatch");
  const int level = std::max(f.res.level, g.res.level);
  PiecewiseConstantFn ff = refine(f, level);
  const PiecewiseConstantFn gg = refine(g, level);
  for (std::size_t i = 0; i < ff.cell_values.size(); ++i)
    ff.cell_values[i] *= gg.cell_values[i];
  return ff;
}

double inner_product(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g) {
  if (f.res.dim != g.res.dim)
    throw std::invalid_argument("inner_product: dimension mismatch");
  const PiecewiseConstantFn* fine = &f;
  const PiecewiseConstantFn* coarse = &g;
  if (fine->res.level < coarse->res.level) std::swap(fine, coarse);
  if (fine->res.level == coarse->res.level) {
    double sum = 0.0;
    for (std::size_t i = 0; i < fine->cell_values.size(); ++i)
      sum += fine->cell_values[i] * coarse->cell_values[i];
    return sum / static_cast<double>(fine->res.size);
  }
  double sum = 0.0;
  for (std::int64_t i = 0; i < fine->res.size; ++i) {
    const std::int64_t parent = coarse_parent_index(
        i, fine->res.level, coarse->res.level, fine->res.dim);
    sum += fine->cell_values[static_cast<std::size_t>(i)] *
           coarse->cell_values[static_cast<std::size_t>(parent)];
  }
  return sum / static_cast<double>(fine->res.size);
}

}  // namespace haarcov
