// SPDX-License-Identifier: MIT
#include "haarcov/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace haarcov {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

// Worst-case extremes of the nuisance functions (exact for the Haar series).
void nuisance_range(const WaveletSeriesFunction& f, double& lo, double& hi) {
  lo = f.offset + f.series_inf();
  hi = f.offset + f.series_sup();
}

}  // namespace

void Dgp::draw_response(std::span<const double> x, RngStream& rng, double& a,
                        double& y) const {
  const double w = rng.rademacher();
  const double va = rng.uniform_pm1();
  const double vb = rng.uniform_pm1();
  a = p_at(x) + sigma_a * w + tau * va;
  y = b_at(x) + sigma_y * w + tau * vb;
}

void Dataset::assign_folds(int m) {
  require(m >= 1, "assign_folds: fold count must be >= 1");
  require(n >= m, "assign_folds: need at least one row per fold");
  fold_count = m;
  const std::int64_t per_fold = n / m;
  fold_of.assign(static_cast<std::size_t>(n), -1);
  for (std::int64_t i = 0; i < per_fold * m; ++i)
    fold_of[static_cast<std::size_t>(i)] = static_cast<int>(i / per_fold);
}

std::int64_t Dataset::fold_size() const {
  return fold_count > 0 ? n / fold_count : n;
}

void validate_budget(const Dgp& dgp) {
  require(dgp.dim >= 1, "dgp: dim must be >= 1");
  require(dgp.c1 < dgp.c2, "dgp: bounds must satisfy C1 < C2");
  // Haar regularity S = 1: reject alpha, beta >= 1 for nonconstant nuisances.
  if (dgp.p_fn.amplitude > 0.0)
    require(dgp.p_fn.smoothness > 0.0 && dgp.p_fn.smoothness < 1.0,
            "dgp: Haar mode requires 0 < alpha < 1");
  if (dgp.b_fn.amplitude > 0.0)
    require(dgp.b_fn.smoothness > 0.0 && dgp.b_fn.smoothness < 1.0,
            "dgp: Haar mode requires 0 < beta < 1");
  require(std::abs(dgp.sigma_a * dgp.sigma_y - dgp.rho) <= 1e-12,
          "dgp: noise loadings must satisfy sigma_a * sigma_y == rho");
  require(dgp.tau >= 0.0, "dgp: tau must be >= 0");

  const double noise_a = std::abs(dgp.sigma_a) + dgp.tau;
  const double noise_y = std::abs(dgp.sigma_y) + dgp.tau;
  double plo, phi, blo, bhi;
  nuisance_range(dgp.p_fn, plo, phi);
  nuisance_range(dgp.b_fn, blo, bhi);
  const bool ok_a = (plo - noise_a >= dgp.c1) && (phi + noise_a <= dgp.c2);
  const bool ok_y = (blo - noise_y >= dgp.c1) && (bhi + noise_y <= dgp.c2);
  if (!(ok_a && ok_y))
    throw std::invalid_argument(
        "dgp: amplitude budget violated -- nuisance range plus noise exceeds "
        "[C1, C2]; sampling never clips, so reject the configuration");

  if (dgp.density_mode == DensityMode::kKnownBounded) {
    require(dgp.known_density.has_value(),
            "dgp: KnownBounded mode requires a known density");
    const auto& f = *dgp.known_density;
    require(f.res.dim == dgp.dim, "dgp: density dimension mismatch");
    for (double v : f.cell_values)
      require(v > 0.0, "dgp: known density must be strictly positive");
    require(std::abs(f.integral() - 1.0) <= 1e-12,
            "dgp: known density must integrate to 1");
  }
  if (dgp.density_mode == DensityMode::kUnknown)
    require(dgp.gamma > 0.0, "dgp: Unknown density mode requires gamma > 0");
}

Dataset sample(const Dgp& dgp, std::int64_t total_n, RngStream& rng) {
  require(total_n >= 1, "sample: need total_n >= 1");
  validate_budget(dgp);

  Dataset data;
  data.dim = dgp.dim;
  data.n = total_n;
  data.xs.resize(static_cast<std::size_t>(total_n * dgp.dim));
  data.as.resize(static_cast<std::size_t>(total_n));
  data.ys.resize(static_cast<std::size_t>(total_n));
  data.fold_of.assign(static_cast<std::size_t>(total_n), -1);

  // Inverse-CDF table over dyadic cells for the KnownBounded design density.
  std::vector<double> cdf;
  if (dgp.density_mode == DensityMode::kKnownBounded) {
    const auto& f = *dgp.known_density;
    cdf.resize(f.cell_values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < f.cell_values.size(); ++i) {
      acc += f.cell_values[i] / static_cast<double>(f.res.size);
      cdf[i] = acc;
    }
    cdf.back() = 1.0;
  }

  std::vector<double> x(static_cast<std::size_t>(dgp.dim));
  for (std::int64_t i = 0; i < total_n; ++i) {
    if (dgp.density_mode == DensityMode::kKnownBounded) {
      const auto& f = *dgp.known_density;
      const double u = rng.uniform01();
      std::size_t cell = static_cast<std::size_t>(
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (cell >= cdf.size()) cell = cdf.size() - 1;
      // Uniform position inside the selected cell.
      const std::int64_t per_axis = cells_per_axis(f.res);
      const double width = 1.0 / static_cast<double>(per_axis);
      std::int64_t rest = static_cast<std::int64_t>(cell);
      for (int a = dgp.dim - 1; a >= 0; --a) {
        const std::int64_t c = rest % per_axis;
        rest /= per_axis;
        x[static_cast<std::size_t>(a)] =
            (static_cast<double>(c) + rng.uniform01()) * width;
      }
    } else {
      for (int a = 0; a < dgp.dim; ++a) x[static_cast<std::size_t>(a)] = rng.uniform01();
    }
    for (int a = 0; a < dgp.dim; ++a)
      data.xs[static_cast<std::size_t>(i * dgp.dim + a)] = x[static_cast<std::size_t>(a)];
    double a_val, y_val;
    dgp.draw_response(x, rng, a_val, y_val);
    data.as[static_cast<std::size_t>(i)] = a_val;
    data.ys[static_cast<std::size_t>(i)] = y_val;
  }
  return data;
}

double true_psi(const Dgp& dgp) { return dgp.rho; }

Dgp worst_case_dgp(double alpha, double beta, int dim, double epsilon,
                   int max_level, double c1, double c2) {
  require(alpha > 0.0 && alpha < 1.0, "worst_case_dgp: need 0 < alpha < 1 (Haar)");
  require(beta > 0.0 && beta < 1.0, "worst_case_dgp: need 0 < beta < 1 (Haar)");
  require(dim >= 1, "worst_case_dgp: dim must be >= 1");
  require(epsilon >= 0.0, "worst_case_dgp: epsilon must be >= 0");
  require(max_level >= 0, "worst_case_dgp: max_level must be >= 0");
  Dgp dgp;
  dgp.dim = dim;
  dgp.p_fn = WaveletSeriesFunction{alpha, epsilon, max_level, dim, 0, 0.5};
  dgp.b_fn = WaveletSeriesFunction{beta, epsilon, max_level, dim, 0, 0.5};
  dgp.c1 = c1;
  dgp.c2 = c2;
  validate_budget(dgp);
  return dgp;
}

Dgp constant_dgp(double p0, double b0, double rho, int dim) {
  Dgp dgp;
  dgp.dim = dim;
  dgp.p_fn = WaveletSeriesFunction{0.5, 0.0, 0, dim, 0, p0};
  dgp.b_fn = WaveletSeriesFunction{0.5, 0.0, 0, dim, 0, b0};
  dgp.rho = rho;
  const double s = std::sqrt(std::abs(rho));
  dgp.sigma_a = s;
  dgp.sigma_y = rho >= 0.0 ? s : -s;
  dgp.tau = 0.05;
  validate_budget(dgp);
  return dgp;
}

}  // namespace haarcov
