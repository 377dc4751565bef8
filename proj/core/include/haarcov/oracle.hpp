// SPDX-License-Identifier: MIT
//
// Independent exact computations used as ground truth in tests:
//
//   * projection bias of the plug-in / bias-corrected estimators on the
//     worst-case Haar-series pairs (coefficient geometric sum, cross-checked
//     against exact Haar quadrature of the projected residual product);
//   * nonlinearity bias (single split) and own-observation bias (no split)
//     of each estimator on constant-nuisance DGPs, exact at finite n;
//   * exact kernel-moment identities behind the variance bounds (trace,
//     nesting, and the six product-moment integrals), evaluated by direct
//     cell-geometry enumeration with no reference to the closed forms they
//     verify.
//
// Every value is produced by two independent routes that must agree to 1e-12
// relative; disagreement throws std::logic_error. Signs of the finite-n bias
// formulas were fixed once against high-replication Monte Carlo runs stored
// as committed fixtures (tests/fixtures/bias_signs.json).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haarcov/dyadic.hpp"
#include "haarcov/estimator.hpp"
#include "haarcov/model.hpp"

namespace haarcov::oracle {

// Exact bias of the double-split INT/MC (resolution floor k1^k2) and IF
// (resolution ceiling k1 v k2) estimators on a worst-case series DGP:
//   sum over residual levels l of  eps_p * eps_b * (2^d - 1) * 2^{-l(alpha+beta)}.
// Requires a uniform-design series DGP with base level 0. The quadrature
// route materializes the series exactly, so (max_level+1)*dim must stay
// small enough to enumerate (<= 22).
double exact_projection_bias(const Dgp& dgp, DyadicResolution k1,
                             DyadicResolution k2, EstimatorKind kind);

// Exact leading nonlinearity bias c * (k1 ^ k2) / n of the single-split
// plug-in estimators on a constant DGP (c = p0*b0 + rho, n = per-fold size).
// The magnitude carries no sign: signs per estimator live in
// exact_constant_bias.
double exact_nonlinearity_bias(const Dgp& dgp, DyadicResolution k1,
                               DyadicResolution k2, std::int64_t n);

// Exact finite-n no-split bias of NR / IF / MC on a constant DGP, including
// the kernel-diagonal (own-observation) terms evaluated through the trace
// identity K(x,x) = k and the nesting integral. n = fold size.
double exact_own_observation_bias(const Dgp& dgp, DyadicResolution k1,
                                  DyadicResolution k2, std::int64_t n,
                                  EstimatorKind kind);

// Exact finite-n bias of every (estimator, scheme) combination on a constant
// DGP with uniform design; n is the per-fold size. Double-split combinations
// are exactly unbiased at constants.
double exact_constant_bias(const Dgp& dgp, EstimatorKind kind,
                           SplitScheme scheme, DyadicResolution k1,
                           DyadicResolution k2, std::int64_t n);

// Exact integrated variance of the projection regressor for A at resolution
// k from n i.i.d. rows under a uniform design:
//   ( k * E[A^2] - ||proj_k p||^2 ) / n.
double exact_integrated_variance(const Dgp& dgp, DyadicResolution res,
                                 std::int64_t n);

// One kernel-moment quantity: exact value from cell-geometry enumeration
// against the order claimed by the variance bounds.
struct KernelMomentQuantity {
  std::string name;
  double value = 0.0;    // exact enumeration
  double claimed = 0.0;  // claimed order at unit constant
  double ratio = 0.0;    // value / claimed
};

struct KernelMomentReport {
  DyadicResolution k1, k2;
  std::vector<KernelMomentQuantity> quantities;
  bool all_within_factor_two = false;
};

// Evaluates the six product-moment integrals plus the trace and nesting
// identities at (k1, k2) by exact cell enumeration (uniform design). The
// enumeration is O((k1 v k2)^3); sizes above 2^8 cells are rejected.
KernelMomentReport kernel_moment_check(DyadicResolution k1, DyadicResolution k2);

}  // namespace haarcov::oracle
