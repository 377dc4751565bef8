// SPDX-License-Identifier: MIT
#include "haarcov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "haarcov/piecewise.hpp"

namespace haarcov::oracle {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

// Dual-route agreement gate: 1e-12 relative.
double agreed(double route_a, double route_b, const char* what) {
  const double scale = std::max({1.0, std::abs(route_a), std::abs(route_b)});
  if (std::abs(route_a - route_b) > 1e-12 * scale)
    throw std::logic_error(std::string("oracle routes disagree: ") + what);
  return route_a;
}

void require_uniform_series(const Dgp& dgp, const char* what) {
  require(dgp.density_mode == DensityMode::kUniform, what);
  require(dgp.p_fn.base_level == 0 && dgp.b_fn.base_level == 0, what);
  require(dgp.p_fn.dim == dgp.dim && dgp.b_fn.dim == dgp.dim, what);
}

void require_constant(const Dgp& dgp, const char* what) {
  require(dgp.density_mode == DensityMode::kUniform, what);
  require(dgp.p_fn.amplitude == 0.0 && dgp.b_fn.amplitude == 0.0, what);
}

double mean_ay(const Dgp& dgp) { return dgp.p_fn.offset * dgp.b_fn.offset + dgp.rho; }

// Projection onto V_res when res is coarser than f, otherwise f itself
// (V_res then contains f exactly).
PiecewiseConstantFn project_clamped(const PiecewiseConstantFn& f,
                                    const DyadicResolution& res) {
  if (res.level >= f.res.level) return f;
  return project(f, res);
}

// cell -> parent-cell index table between nested resolutions, computed by
// pure cell geometry (centers and containment).
std::vector<std::int64_t> parent_cells(const DyadicResolution& fine,
                                       const DyadicResolution& coarse) {
  std::vector<std::int64_t> parent(static_cast<std::size_t>(fine.size));
  std::vector<double> center(static_cast<std::size_t>(fine.dim));
  for (std::int64_t c = 0; c < fine.size; ++c) {
    cell_center(fine, c, center);
    parent[static_cast<std::size_t>(c)] = cell_index(coarse, center);
  }
  return parent;
}

// Exact trace integral of the projection kernel by cell enumeration:
// sum over cells of K(center, center) * volume.
double trace_integral(const DyadicResolution& res) {
  std::vector<double> center(static_cast<std::size_t>(res.dim));
  double sum = 0.0;
  for (std::int64_t c = 0; c < res.size; ++c) {
    cell_center(res, c, center);
    sum += kernel_eval(res, center, center) / static_cast<double>(res.size);
  }
  return sum;
}

constexpr std::int64_t kMaxPairEnumCells = std::int64_t{1} << 12;

// Exact nesting integral of two projection kernels by pair enumeration over
// the finer partition.
double nesting_integral(const DyadicResolution& k1, const DyadicResolution& k2) {
  require(k1.dim == k2.dim, "nesting integral: dimension mismatch");
  const DyadicResolution fine = k1.level >= k2.level ? k1 : k2;
  require(fine.size <= kMaxPairEnumCells,
          "nesting integral: resolution too fine to enumerate");
  const std::vector<std::int64_t> c1 = parent_cells(fine, k1);
  const std::vector<std::int64_t> c2 = parent_cells(fine, k2);
  const double vol = 1.0 / static_cast<double>(fine.size);
  const double kk = static_cast<double>(k1.size) * static_cast<double>(k2.size);
  double sum = 0.0;
  for (std::int64_t z = 0; z < fine.size; ++z)
    for (std::int64_t x = 0; x < fine.size; ++x)
      if (c1[static_cast<std::size_t>(z)] == c1[static_cast<std::size_t>(x)] &&
          c2[static_cast<std::size_t>(z)] == c2[static_cast<std::size_t>(x)])
        sum += kk * vol * vol;
  return sum;
}

}  // namespace

double exact_projection_bias(const Dgp& dgp, DyadicResolution k1,
                             DyadicResolution k2, EstimatorKind kind) {
  require_uniform_series(dgp, "projection bias oracle: needs a uniform-design series DGP");
  require(k1.dim == dgp.dim && k2.dim == dgp.dim,
          "projection bias oracle: resolution dimension mismatch");
  require(kind == EstimatorKind::kInt || kind == EstimatorKind::kMc ||
              kind == EstimatorKind::kIf,
          "projection bias oracle: INT, MC, or IF only");

  const int level =
      kind == EstimatorKind::kIf ? std::max(k1.level, k2.level) : std::min(k1.level, k2.level);
  const double alpha = dgp.p_fn.smoothness;
  const double beta = dgp.b_fn.smoothness;
  const int last = std::min(dgp.p_fn.max_level, dgp.b_fn.max_level);

  // Route 1: level-wise coefficient sum.
  double sum = 0.0;
  for (int l = level; l <= last; ++l) sum += std::pow(2.0, -l * (alpha + beta));
  const double detail_mass = std::pow(2.0, dgp.dim) - 1.0;
  const double route1 = dgp.p_fn.amplitude * dgp.b_fn.amplitude * detail_mass * sum;

  // Route 2: exact Haar quadrature of <p - proj p, b - proj b> on the
  // materialized series.
  const int enum_levels = std::max(dgp.p_fn.max_level, dgp.b_fn.max_level) + 1;
  require(enum_levels * dgp.dim <= 22,
          "projection bias oracle: truncation too fine for the quadrature route");
  const PiecewiseConstantFn p = dgp.p_fn.to_piecewise();
  const PiecewiseConstantFn b = dgp.b_fn.to_piecewise();
  const PiecewiseConstantFn pp = project_clamped(p, k1);
  double route2;
  if (kind == EstimatorKind::kIf) {
    const PiecewiseConstantFn pb = project_clamped(b, k2);
    route2 = inner_product(p, b) - inner_product(p, pb) - inner_product(pp, b) +
             inner_product(pp, pb);
  } else {
    const PiecewiseConstantFn pb = project_clamped(b, k2);
    route2 = inner_product(p, b) - inner_product(pp, pb);
  }
  return agreed(route1, route2, "projection bias");
}

double exact_nonlinearity_bias(const Dgp& dgp, DyadicResolution k1,
                               DyadicResolution k2, std::int64_t n) {
  require_constant(dgp, "nonlinearity bias oracle: needs a constant uniform DGP");
  require(k1.dim == dgp.dim && k2.dim == dgp.dim,
          "nonlinearity bias oracle: resolution dimension mismatch");
  require(n >= 1, "nonlinearity bias oracle: n must be >= 1");
  const double c = mean_ay(dgp);
  const double route1 = c * static_cast<double>(std::min(k1.size, k2.size)) /
                        static_cast<double>(n);
  const double route2 = c * nesting_integral(k1, k2) / static_cast<double>(n);
  return agreed(route1, route2, "nonlinearity bias");
}

double exact_own_observation_bias(const Dgp& dgp, DyadicResolution k1,
                                  DyadicResolution k2, std::int64_t n,
                                  EstimatorKind kind) {
  require_constant(dgp, "own-observation bias oracle: needs a constant uniform DGP");
  require(n >= 1, "own-observation bias oracle: n must be >= 1");
  require(kind == EstimatorKind::kNr || kind == EstimatorKind::kIf ||
              kind == EstimatorKind::kMc,
          "own-observation bias oracle: NR, IF, or MC only");
  const double c = mean_ay(dgp);
  const double q = dgp.p_fn.offset * dgp.b_fn.offset;
  const double nn = static_cast<double>(n);

  const auto formula = [&](double t1, double t2, double nest) {
    switch (kind) {
      case EstimatorKind::kNr:
        return (q - c * t2) / nn;
      case EstimatorKind::kIf:
        return c * (-(t1 + t2) / nn + t1 * t2 / (nn * nn) +
                    (nn - 1.0) * nest / (nn * nn)) +
               q * ((nn - 1.0) * (t1 + t2) - nn + 2.0) / (nn * nn);
      default:  // MC
        return q * ((3.0 * nn - 2.0) - (nn - 1.0) * (t1 + t2)) / (nn * nn) -
               c * t1 * t2 / (nn * nn) - (nn - 1.0) * c * nest / (nn * nn);
    }
  };

  // Route 1: plain arithmetic on the sizes.
  const double route1 =
      formula(static_cast<double>(k1.size), static_cast<double>(k2.size),
              static_cast<double>(std::min(k1.size, k2.size)));
  // Route 2: kernel moments from cell enumeration.
  const double route2 =
      formula(trace_integral(k1), trace_integral(k2), nesting_integral(k1, k2));
  return agreed(route1, route2, "own-observation bias");
}

double exact_constant_bias(const Dgp& dgp, EstimatorKind kind, SplitScheme scheme,
                           DyadicResolution k1, DyadicResolution k2,
                           std::int64_t n) {
  require_constant(dgp, "constant bias oracle: needs a constant uniform DGP");
  const double q = dgp.p_fn.offset * dgp.b_fn.offset;
  const double nn = static_cast<double>(n);
  switch (scheme) {
    case SplitScheme::kDouble:
      return 0.0;  // separate folds: no projection, nonlinearity, or own-observation bias
    case SplitScheme::kSingle:
      switch (kind) {
        case EstimatorKind::kNr: return 0.0;
        case EstimatorKind::kIf:
          return exact_nonlinearity_bias(dgp, k1, k2, n) - q / nn;
        default:  // INT, MC
          return -exact_nonlinearity_bias(dgp, k1, k2, n) + q / nn;
      }
    case SplitScheme::kNone:
      if (kind == EstimatorKind::kInt)
        return -exact_nonlinearity_bias(dgp, k1, k2, n) + q / nn;
      return exact_own_observation_bias(dgp, k1, k2, n, kind);
  }
  throw std::invalid_argument("constant bias oracle: bad scheme");
}

double exact_integrated_variance(const Dgp& dgp, DyadicResolution res,
                                 std::int64_t n) {
  require(dgp.density_mode == DensityMode::kUniform,
          "integrated variance oracle: uniform design only");
  require(res.dim == dgp.dim, "integrated variance oracle: dimension mismatch");
  require(n >= 1, "integrated variance oracle: n must be >= 1");
  require((dgp.p_fn.max_level + 1) * dgp.dim <= 22,
          "integrated variance oracle: truncation too fine to enumerate");

  const PiecewiseConstantFn p = dgp.p_fn.to_piecewise();
  const double second_moment =
      p.l2_norm_sq() + dgp.sigma_a * dgp.sigma_a + dgp.tau * dgp.tau / 3.0;
  // ||proj p||^2 two ways: closed-form projection vs numeric cell averaging.
  const double norm_pw = project_clamped(p, res).l2_norm_sq();
  const double norm_cf = res.level >= p.res.level
                             ? p.l2_norm_sq()
                             : dgp.p_fn.project_exact(res).l2_norm_sq();
  const double proj_norm_sq = agreed(norm_cf, norm_pw, "projected norm");
  return (static_cast<double>(res.size) * second_moment - proj_norm_sq) /
         static_cast<double>(n);
}

KernelMomentReport kernel_moment_check(DyadicResolution k1, DyadicResolution k2) {
  require(k1.dim == k2.dim, "kernel moment check: dimension mismatch");
  const DyadicResolution fine = k1.level >= k2.level ? k1 : k2;
  require(fine.size <= (std::int64_t{1} << 8),
          "kernel moment check: resolution too fine to enumerate");

  const std::int64_t big = fine.size;
  const std::vector<std::int64_t> c1 = parent_cells(fine, k1);
  const std::vector<std::int64_t> c2 = parent_cells(fine, k2);
  const double vol = 1.0 / static_cast<double>(big);
  const double v1 = static_cast<double>(k1.size);
  const double v2 = static_cast<double>(k2.size);

  // Fused enumeration of the six product-moment integrals. For each (x, y)
  // the inner z-sums are the conditional kernel moments; everything is a
  // finite sum over dyadic cells, exact in double precision.
  double m_pair = 0, m_factored = 0, m_sqmean = 0, m_triple1 = 0, m_triple2 = 0,
         m_fourth = 0;
  for (std::int64_t x = 0; x < big; ++x) {
    for (std::int64_t y = 0; y < big; ++y) {
      double s_a = 0, s_b = 0, s_c = 0, s_d = 0, s_e = 0, s_f = 0;
      for (std::int64_t z = 0; z < big; ++z) {
        const bool zx1 = c1[static_cast<std::size_t>(z)] == c1[static_cast<std::size_t>(x)];
        const bool zx2 = c2[static_cast<std::size_t>(z)] == c2[static_cast<std::size_t>(x)];
        const bool zy1 = c1[static_cast<std::size_t>(z)] == c1[static_cast<std::size_t>(y)];
        const bool zy2 = c2[static_cast<std::size_t>(z)] == c2[static_cast<std::size_t>(y)];
        if (zx1 && zy2) s_a += v1 * v2 * vol;
        if (zx1 && zy1) s_b += v1 * v1 * vol;
        if (zx2 && zy2) s_c += v2 * v2 * vol;
        if (zx1 && zx2 && zy1) s_d += v1 * v2 * v1 * vol;
        if (zx1 && zx2 && zy2) s_e += v1 * v2 * v2 * vol;
        if (zx1 && zx2 && zy1 && zy2) s_f += v1 * v2 * v1 * v2 * vol;
      }
      const double w = vol * vol;
      m_pair += s_a * w;
      m_factored += s_b * s_c * w;
      m_sqmean += s_a * s_a * w;
      m_triple1 += s_d * w;
      m_triple2 += s_e * w;
      m_fourth += s_f * w;
    }
  }

  const double kmin = static_cast<double>(std::min(k1.size, k2.size));
  KernelMomentReport report;
  report.k1 = k1;
  report.k2 = k2;
  report.quantities = {
      {"pair_product", m_pair, 1.0, 0.0},
      {"factored_square", m_factored, kmin, 0.0},
      {"squared_mean", m_sqmean, kmin, 0.0},
      {"triple_k1", m_triple1, kmin, 0.0},
      {"triple_k2", m_triple2, kmin, 0.0},
      {"fourth", m_fourth, kmin * kmin, 0.0},
      {"trace_k1", trace_integral(k1), static_cast<double>(k1.size), 0.0},
      {"trace_k2", trace_integral(k2), static_cast<double>(k2.size), 0.0},
      {"nesting", nesting_integral(k1, k2), kmin, 0.0},
  };
  report.all_within_factor_two = true;
  for (auto& quantity : report.quantities) {
    quantity.ratio = quantity.value / quantity.claimed;
    if (!(quantity.ratio >= 0.5 && quantity.ratio <= 2.0))
      report.all_within_factor_two = false;
  }
  return report;
}

}  // namespace haarcov::oracle
