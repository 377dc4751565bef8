// SPDX-License-Identifier: MIT
#include "haarcov/regime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace haarcov {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

constexpr double kNudge = 1e-9;  // forgives float error at exact powers of 2

// Dyadic per-axis level for an exact-order target k ~ n^{q}: floor.
int exact_order_level(double q, double log2_n, int dim) {
  const int j = static_cast<int>(std::floor(q * log2_n / dim + kNudge));
  return std::max(j, 0);
}

// Floor midpoint of the admissible dyadic level window for
// n^{lo} <= k <= n^{hi}. A window that rounds empty degenerates to its
// lower edge.
int window_level(double lo, double hi, double log2_n, int dim) {
  int j_lo = static_cast<int>(std::ceil(lo * log2_n / dim - kNudge));
  int j_hi = static_cast<int>(std::floor(hi * log2_n / dim + kNudge));
  j_lo = std::max(j_lo, 0);
  if (j_hi < j_lo) j_hi = j_lo;
  return (j_lo + j_hi) / 2;
}

DyadicResolution concretize(const ResolutionRule& rule, std::int64_t n, int dim) {
  const double log2_n = std::log2(static_cast<double>(n));
  const int level = rule.kind == ResolutionRule::Kind::kExactOrder
                        ? exact_order_level(rule.exponent, log2_n, dim)
                        : window_level(rule.lo, rule.hi, log2_n, dim);
  return DyadicResolution::from_level(level, dim);
}

ResolutionRule exact_rule(double q) {
  return {ResolutionRule::Kind::kExactOrder, q, 0.0, 0.0};
}

ResolutionRule window_rule(double lo, double hi) {
  return {ResolutionRule::Kind::kWindow, 0.0, lo, hi};
}

// Best-rate resolution rules, best exponent, and achievability for one
// (kind, scheme). Exponent conventions: MSE ~ n^{-best}, k ~ n^{q}.
EstimatorRegime make_regime(EstimatorKind kind, SplitScheme scheme,
                            double alpha, double beta, int dim) {
  using K = EstimatorKind;
  using S = SplitScheme;
  require(!(kind == K::kNr && scheme == S::kDouble),
          "regime: NR has no double-split variant");

  const double d = static_cast<double>(dim);
  const double sum = alpha + beta;
  const double half = sum / 2.0;
  const double minimax = minimax_rate_exponent(alpha, beta, dim);

  EstimatorRegime r;
  r.kind = kind;
  r.scheme = scheme;

  // Rules and best exponents.
  switch (scheme) {
    case S::kDouble:
      if (kind == K::kInt) {
        r.best_exponent = minimax;
        r.achievable = true;
        if (half >= d / 4.0) {
          r.k1_rule = r.k2_rule = window_rule(d / (2.0 * sum), 1.0);
        } else {
          r.k1_rule = r.k2_rule = exact_rule(2.0 * d / (2.0 * sum + d));
        }
      } else if (kind == K::kMc) {
        if (half >= d / 4.0) {
          r.best_exponent = 1.0;
          r.achievable = true;
          r.k1_rule = r.k2_rule = window_rule(d / (2.0 * sum), 1.0);
        } else {
          r.best_exponent = 3.0 * sum / (sum + d);
          r.achievable = false;
          r.k1_rule = r.k2_rule = exact_rule(3.0 * d / (2.0 * sum + 2.0 * d));
        }
      } else {  // IF
        r.best_exponent = minimax;
        r.achievable = true;
        if (half >= d / 4.0) {
          r.k1_rule = r.k2_rule = window_rule(d / (2.0 * sum), 1.0);
        } else {
          // k1 carries the binding order; the small side is free below n.
          r.k1_rule = exact_rule(2.0 * d / (2.0 * sum + d));
          r.k2_rule = window_rule(0.0, 1.0);
        }
      }
      break;
    case S::kSingle:
      if (kind == K::kInt || kind == K::kMc) {
        if (half >= d / 2.0) {
          r.best_exponent = 1.0;
          r.achievable = true;
          r.k1_rule = r.k2_rule = window_rule(d / (2.0 * sum), 0.5);
        } else {
          r.best_exponent = 2.0 * sum / (sum + d);
          r.achievable = false;
          r.k1_rule = r.k2_rule = exact_rule(d / (sum + d));
        }
      } else if (kind == K::kIf) {
        r.best_exponent = minimax;
        r.achievable = true;
        if (half >= d / 4.0) {
          r.k1_rule = window_rule(d / (2.0 * sum), 1.0);
          r.k2_rule = window_rule(0.0, 0.5);
        } else {
          r.k1_rule = exact_rule(2.0 * d / (2.0 * sum + d));
          r.k2_rule = window_rule(0.0, d / (2.0 * sum + d));
        }
      } else {  // NR
        r.best_exponent = minimax;
        r.achievable = true;
        if (half >= d / 4.0) {
          r.k1_rule = r.k2_rule = window_rule(d / (2.0 * sum), 1.0);
        } else {
          r.k1_rule = r.k2_rule = exact_rule(2.0 * d / (2.0 * sum + d));
        }
      }
      break;
    case S::kNone:
      if (half >= d / 2.0) {
        r.best_exponent = 1.0;
        r.achievable = true;
        r.k1_rule = r.k2_rule = window_rule(d / (2.0 * sum), 0.5);
      } else {
        r.best_exponent = 2.0 * sum / (sum + d);
        r.achievable = false;
        r.k1_rule = r.k2_rule = exact_rule(d / (sum + d));
      }
      break;
  }

  // Tuning flags relative to prediction-optimal resolutions
  // k1 ~ n^{d/(2 alpha + d)}, k2 ~ n^{d/(2 beta + d)}.
  const double half_d = d / 2.0;
  const bool a_rough = alpha < half_d;
  const bool b_rough = beta < half_d;
  const bool both_smooth = !a_rough && !b_rough;
  const bool equal_smoothness = alpha == beta;
  switch (scheme) {
    case S::kDouble:
      if (kind == K::kInt || kind == K::kMc) {
        r.undersmooth_k1 = b_rough;
        r.undersmooth_k2 = a_rough;
        r.pred_optimal_sufficient = both_smooth;
      } else {  // IF: either side may carry the large resolution
        r.undersmooth_k1 = r.undersmooth_k2 = std::max(alpha, beta) < half_d;
        r.pred_optimal_sufficient = std::max(alpha, beta) >= half_d;
      }
      break;
    case S::kSingle:
      if (kind == K::kInt || kind == K::kMc) {
        r.undersmooth_k1 = beta < std::min(alpha, half_d);
        r.undersmooth_k2 = alpha < std::min(beta, half_d);
        r.pred_optimal_sufficient = both_smooth || equal_smoothness;
      } else if (kind == K::kIf) {
        const bool rough_pair = std::max(alpha, beta) < half_d;
        r.undersmooth_k1 = rough_pair;
        r.oversmooth_k2 = rough_pair;
        r.pred_optimal_sufficient = !rough_pair;
      } else {  // NR
        r.undersmooth_k2 = a_rough;
        r.pred_optimal_sufficient = !a_rough;
      }
      break;
    case S::kNone:
      if (kind == K::kInt) {
        r.undersmooth_k1 = beta < std::min(alpha, half_d);
        r.undersmooth_k2 = alpha < std::min(beta, half_d);
        r.pred_optimal_sufficient = both_smooth || equal_smoothness;
      } else if (kind == K::kMc) {
        const bool k1_up = beta < std::min(alpha, half_d);
        const bool k2_up = alpha < std::min(beta, half_d);
        r.undersmooth_k1 = k1_up;
        r.oversmooth_k2 = k1_up;
        r.undersmooth_k2 = k2_up;
        r.oversmooth_k1 = k2_up;
        r.pred_optimal_sufficient = both_smooth || equal_smoothness;
      } else if (kind == K::kIf) {
        r.oversmooth_k1 = alpha < std::min(beta, half_d);
        r.oversmooth_k2 = beta < std::min(alpha, half_d);
        r.pred_optimal_sufficient = both_smooth || equal_smoothness;
      } else {  // NR
        r.undersmooth_k2 = alpha < std::min(beta, half_d);
        r.pred_optimal_sufficient = alpha >= std::min(beta, half_d);
      }
      break;
  }
  return r;
}

}  // namespace

double minimax_rate_exponent(double alpha, double beta, int dim) {
  require(alpha > 0.0 && beta > 0.0, "minimax_rate_exponent: need alpha, beta > 0");
  require(dim >= 1, "minimax_rate_exponent: dim must be >= 1");
  const double d = static_cast<double>(dim);
  const double sum = alpha + beta;
  if (sum / 2.0 >= d / 4.0) return 1.0;
  return 4.0 * sum / (2.0 * sum + d);
}

double gstar(double alpha, double beta, int dim) {
  require(alpha > 0.0 && beta > 0.0, "gstar: need alpha, beta > 0");
  require(dim >= 1, "gstar: dim must be >= 1");
  const double d = static_cast<double>(dim);
  const double delta = (alpha + beta) / 2.0;
  const double ratio = std::abs(alpha / beta - 1.0);
  const double shrink = 1.0 - 4.0 * delta / d;
  const double numerator = 2.0 * delta * (ratio + 1.0) * shrink;
  const double denominator = (ratio + 2.0) * (1.0 + 4.0 * delta / d) -
                             4.0 * (delta / d) * shrink * (ratio + 1.0);
  return numerator / denominator;
}

std::string ResolutionRule::describe() const {
  char buf[64];
  if (kind == Kind::kExactOrder)
    std::snprintf(buf, sizeof buf, "exact:%.6g", exponent);
  else
    std::snprintf(buf, sizeof buf, "window:[%.6g;%.6g]", lo, hi);
  return buf;
}

const EstimatorRegime& RegimeReport::entry(EstimatorKind kind,
                                           SplitScheme scheme) const {
  for (const auto& e : entries)
    if (e.kind == kind && e.scheme == scheme) return e;
  throw std::invalid_argument("RegimeReport: no entry for that combination");
}

RegimeReport regime_report(double alpha, double beta, int dim, std::int64_t n) {
  require(alpha > 0.0 && beta > 0.0, "regime_report: need alpha, beta > 0");
  require(dim >= 1, "regime_report: dim must be >= 1");
  require(n >= 2, "regime_report: n must be >= 2");
  RegimeReport report;
  report.alpha = alpha;
  report.beta = beta;
  report.dim = dim;
  report.n = n;
  report.minimax_exponent = minimax_rate_exponent(alpha, beta, dim);
  for (EstimatorKind kind : {EstimatorKind::kInt, EstimatorKind::kMc,
                             EstimatorKind::kNr, EstimatorKind::kIf}) {
    for (SplitScheme scheme :
         {SplitScheme::kNone, SplitScheme::kSingle, SplitScheme::kDouble}) {
      if (kind == EstimatorKind::kNr && scheme == SplitScheme::kDouble) continue;
      EstimatorRegime r = make_regime(kind, scheme, alpha, beta, dim);
      r.k1 = concretize(r.k1_rule, n, dim);
      r.k2 = concretize(r.k2_rule, n, dim);
      report.entries.push_back(std::move(r));
    }
  }
  return report;
}

std::pair<DyadicResolution, DyadicResolution> minimax_resolution(
    EstimatorKind kind, SplitScheme scheme, double alpha, double beta, int dim,
    std::int64_t n) {
  require(alpha > 0.0 && beta > 0.0, "minimax_resolution: need alpha, beta > 0");
  require(dim >= 1, "minimax_resolution: dim must be >= 1");
  require(n >= 2, "minimax_resolution: n must be >= 2");
  const EstimatorRegime r = make_regime(kind, scheme, alpha, beta, dim);
  return {concretize(r.k1_rule, n, dim), concretize(r.k2_rule, n, dim)};
}

}  // namespace haarcov
