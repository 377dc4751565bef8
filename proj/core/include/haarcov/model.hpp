// SPDX-License-Identifier: MIT
//
// Synthetic data-generating processes for the model class: bounded (A, Y),
// Hölder nuisance functions p(x) = E[A|X=x] and b(x) = E[Y|X=x], uniform (or
// piecewise-constant known) design density, and exactly known ground truth
// psi = E[Cov(A,Y|X)]. Noise uses a shared bounded Rademacher component so
// the almost-sure bounds hold with zero clipping:
//   A = p(X) + sigma*W + tau*V_A,  Y = b(X) + sigma'*W + tau*V_B,
// with W Rademacher, V_* independent uniform on [-1,1], sigma*sigma' = rho.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "haarcov/piecewise.hpp"
#include "haarcov/rng.hpp"
#include "haarcov/series.hpp"

namespace haarcov {

enum class DensityMode {
  kUniform,       // X ~ Uniform[0,1]^d, weights w == 1
  kKnownBounded,  // X ~ piecewise-constant density f, weights w == f
  kUnknown,       // X ~ Uniform[0,1]^d, weights w == clamped density estimate
};

// Data-generating process. The nuisance functions are truncated Haar series
// (constants are the epsilon = 0 special case, used by constant_dgp).
struct Dgp {
  int dim = 1;
  WaveletSeriesFunction p_fn;  // E[A|X=x]
  WaveletSeriesFunction b_fn;  // E[Y|X=x]
  double rho = 0.0;            // Cov(A,Y|X=x), constant in x
  double sigma_a = 0.0;        // shared-noise loading on A
  double sigma_y = 0.0;        // shared-noise loading on Y (sigma_a*sigma_y = rho)
  double tau = 0.0;            // independent bounded noise scale
  double c1 = -2.0;            // lower bound for A and Y
  double c2 = 2.0;             // upper bound for A and Y
  DensityMode density_mode = DensityMode::kUniform;
  double gamma = 0.0;          // density smoothness (Unknown mode only)
  // Known design density (KnownBounded mode): piecewise constant, mean 1.
  std::optional<PiecewiseConstantFn> known_density;

  double p_at(std::span<const double> x) const { return p_fn.eval(x); }
  double b_at(std::span<const double> x) const { return b_fn.eval(x); }

  // Draws (A, Y) given X = x.
  void draw_response(std::span<const double> x, RngStream& rng, double& a,
                     double& y) const;
};

// i.i.d. sample with fold bookkeeping. Coordinates are stored row-major in
// xs (n*d doubles); folds are contiguous equal-size blocks set by assign_folds.
struct Dataset {
  int dim = 1;
  std::int64_t n = 0;
  std::vector<double> xs;
  std::vector<double> as;
  std::vector<double> ys;
  std::vector<int> fold_of;  // fold id per row (-1 = unassigned)
  int fold_count = 0;

  std::span<const double> x_row(std::int64_t i) const {
    return {xs.data() + i * dim, static_cast<std::size_t>(dim)};
  }

  // Rows [i*fold_size, (i+1)*fold_size) get fold id i; trailing rows beyond
  // m*floor(n/m) are marked unassigned (equal fold sizes by truncation).
  void assign_folds(int m);
  std::int64_t fold_size() const;
};

// Validates the amplitude budget: every achievable A and Y value must lie in
// [c1, c2] (sup/inf of the nuisance plus noise extremes). Throws
// std::invalid_argument on violation -- sampling never clips.
void validate_budget(const Dgp& dgp);

// Draws total_n i.i.d. rows. Throws if total_n < 1 or the budget fails.
Dataset sample(const Dgp& dgp, std::int64_t total_n, RngStream& rng);

// Ground truth psi = E[Cov(A,Y|X)] = rho (constant conditional covariance).
double true_psi(const Dgp& dgp);

// Worst-case pair: p and b are Haar detail series with smoothness alpha and
// beta, amplitude epsilon (all detail coefficients positive), offset +0.5.
// Noise defaults to zero (add via the returned struct's fields; re-validate
// with validate_budget afterwards). Haar mode requires alpha, beta < 1.
// The trailing bounds let large-amplitude configurations stay budget-valid.
Dgp worst_case_dgp(double alpha, double beta, int dim, double epsilon,
                   int max_level, double c1 = -2.0, double c2 = 2.0);

// Constant nuisances p == p0, b == b0 with conditional covariance rho, so
// E[AY|X] = p0*b0 + rho =: c. Noise scales default to sigma_a = sigma_y =
// sqrt(rho), tau = 0.05.
Dgp constant_dgp(double p0, double b0, double rho, int dim = 1);

}  // namespace haarcov
