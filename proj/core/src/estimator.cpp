// SPDX-License-Identifier: MIT
#include "haarcov/estimator.hpp"

#include <algorithm>
#include <stdexcept>

#include "haarcov/piecewise.hpp"

namespace haarcov {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kInt: return "INT";
    case EstimatorKind::kMc: return "MC";
    case EstimatorKind::kNr: return "NR";
    case EstimatorKind::kIf: return "IF";
  }
  throw std::invalid_argument("to_string: bad estimator kind");
}

const char* to_string(SplitScheme scheme) {
  switch (scheme) {
    case SplitScheme::kNone: return "none";
    case SplitScheme::kSingle: return "single";
    case SplitScheme::kDouble: return "double";
  }
  throw std::invalid_argument("to_string: bad split scheme");
}

const char* to_string(DensityMode mode) {
  switch (mode) {
    case DensityMode::kUniform: return "uniform";
    case DensityMode::kKnownBounded: return "known";
    case DensityMode::kUnknown: return "unknown";
  }
  throw std::invalid_argument("to_string: bad density mode");
}

EstimatorKind parse_estimator_kind(const std::string& s) {
  if (s == "INT") return EstimatorKind::kInt;
  if (s == "MC") return EstimatorKind::kMc;
  if (s == "NR") return EstimatorKind::kNr;
  if (s == "IF") return EstimatorKind::kIf;
  throw std::invalid_argument("parse_estimator_kind: expected INT|MC|NR|IF, got '" + s + "'");
}

SplitScheme parse_split_scheme(const std::string& s) {
  if (s == "none") return SplitScheme::kNone;
  if (s == "single") return SplitScheme::kSingle;
  if (s == "double") return SplitScheme::kDouble;
  throw std::invalid_argument("parse_split_scheme: expected none|single|double, got '" + s + "'");
}

DensityMode parse_density_mode(const std::string& s) {
  if (s == "uniform") return DensityMode::kUniform;
  if (s == "known") return DensityMode::kKnownBounded;
  if (s == "unknown") return DensityMode::kUnknown;
  throw std::invalid_argument("parse_density_mode: expected uniform|known|unknown, got '" + s + "'");
}

bool FoldLayout::has(FoldRole role) const {
  for (const auto& fold_roles : roles)
    if (std::find(fold_roles.begin(), fold_roles.end(), role) != fold_roles.end())
      return true;
  return false;
}

int FoldLayout::fold_for(FoldRole role) const {
  for (int i = 0; i < m; ++i) {
    const auto& fr = roles[static_cast<std::size_t>(i)];
    if (std::find(fr.begin(), fr.end(), role) != fr.end()) return i;
  }
  throw std::invalid_argument("FoldLayout: role not present in layout");
}

FoldLayout fold_layout(EstimatorKind kind, SplitScheme scheme, DensityMode mode) {
  using K = EstimatorKind;
  using S = SplitScheme;
  using R = FoldRole;
  if (mode == DensityMode::kUnknown) {
    require(scheme == S::kDouble,
            "fold_layout: unknown density requires double splitting");
    switch (kind) {
      case K::kInt:
        return {6, {{R::kPFit}, {R::kPDensityFit}, {R::kBFit}, {R::kBDensityFit},
                    {R::kAyMean}, {R::kIntegralDensityFit}}};
      case K::kMc:
        return {6, {{R::kPFit}, {R::kPDensityFit}, {R::kBFit}, {R::kBDensityFit},
                    {R::kAyMean}, {R::kMcEval}}};
      case K::kNr:
        return {3, {{R::kBFit}, {R::kBDensityFit}, {R::kIfEval}}};
      case K::kIf:
        return {5, {{R::kPFit}, {R::kPDensityFit}, {R::kBFit}, {R::kBDensityFit},
                    {R::kIfEval}}};
    }
  }
  require(!(kind == K::kNr && scheme == S::kDouble),
          "fold_layout: NR has no double-split variant");
  switch (scheme) {
    case S::kDouble:
      switch (kind) {
        case K::kInt: return {3, {{R::kPFit}, {R::kBFit}, {R::kAyMean}}};
        case K::kMc:
          return {4, {{R::kPFit}, {R::kBFit}, {R::kAyMean}, {R::kMcEval}}};
        case K::kIf: return {3, {{R::kPFit}, {R::kBFit}, {R::kIfEval}}};
        case K::kNr: break;  // rejected above
      }
      break;
    case S::kSingle:
      switch (kind) {
        case K::kInt: return {2, {{R::kPFit, R::kBFit}, {R::kAyMean}}};
        case K::kMc:
          return {3, {{R::kPFit, R::kBFit}, {R::kAyMean}, {R::kMcEval}}};
        case K::kNr: return {2, {{R::kBFit}, {R::kIfEval}}};
        case K::kIf: return {2, {{R::kPFit, R::kBFit}, {R::kIfEval}}};
      }
      break;
    case S::kNone:
      switch (kind) {
        case K::kInt: return {1, {{R::kPFit, R::kBFit, R::kAyMean}}};
        case K::kMc:
          return {1, {{R::kPFit, R::kBFit, R::kAyMean, R::kMcEval}}};
        case K::kNr: return {1, {{R::kBFit, R::kIfEval}}};
        case K::kIf: return {1, {{R::kPFit, R::kBFit, R::kIfEval}}};
      }
      break;
  }
  throw std::invalid_argument("fold_layout: invalid combination");
}

namespace {

// Mean of fn(i) over the rows of the given fold.
template <typename Fn>
double fold_mean(const Dataset& data, int fold, Fn&& fn) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < data.n; ++i) {
    if (data.fold_of[static_cast<std::size_t>(i)] != fold) continue;
    sum += fn(i);
    ++count;
  }
  require(count > 0, "estimate: empty evaluation fold");
  return sum / static_cast<double>(count);
}

double estimate_rotated(const EstimatorConfig& config, const Dataset& data,
                        const Dgp& dgp, int rotation) {
  using K = EstimatorKind;
  using R = FoldRole;

  require(config.density_mode == dgp.density_mode,
          "estimate: estimator and DGP density modes must agree");
  require(config.swap_nr == false || config.kind == K::kNr,
          "estimate: swap_nr applies to NR only");
  const FoldLayout layout =
      fold_layout(config.kind, config.scheme, config.density_mode);
  require(data.fold_count == layout.m,
          "estimate: dataset fold count does not match the layout");
  require(data.n / layout.m >= 1, "estimate: fold size is zero");

  const auto fold_of = [&](R role) {
    return (layout.fold_for(role) + rotation) % layout.m;
  };

  const bool needs_p = config.kind == K::kInt || config.kind == K::kMc ||
                       config.kind == K::kIf ||
                       (config.kind == K::kNr && config.swap_nr);
  const bool needs_b = config.kind == K::kInt || config.kind == K::kMc ||
                       config.kind == K::kIf ||
                       (config.kind == K::kNr && !config.swap_nr);

  const double gamma = config.gamma > 0.0 ? config.gamma : dgp.gamma;

  // Density weights. Unknown mode fits one density per regression fold.
  FittedDensity density_p, density_b, density_int;
  WeightMode weight_mode = WeightMode::kUniform;
  switch (config.density_mode) {
    case DensityMode::kUniform:
      weight_mode = WeightMode::kUniform;
      break;
    case DensityMode::kKnownBounded:
      weight_mode = WeightMode::kKnownDensity;
      break;
    case DensityMode::kUnknown:
      weight_mode = WeightMode::kEstimatedDensity;
      require(gamma > 0.0, "estimate: unknown density mode needs gamma > 0");
      if (config.kind == K::kNr) {
        // NR's single regression (swapped or not) uses the layout's
        // regression-fold density.
        density_b = fit_density(data, fold_of(R::kBDensityFit), gamma,
                                config.density_c, config.clamp_lo, config.clamp_hi);
      } else {
        if (needs_p)
          density_p = fit_density(data, fold_of(R::kPDensityFit), gamma,
                                  config.density_c, config.clamp_lo, config.clamp_hi);
        if (needs_b)
          density_b = fit_density(data, fold_of(R::kBDensityFit), gamma,
                                  config.density_c, config.clamp_lo, config.clamp_hi);
      }
      if (config.kind == K::kInt)
        density_int = fit_density(data, fold_of(R::kIntegralDensityFit), gamma,
                                  config.density_c, config.clamp_lo, config.clamp_hi);
      break;
  }

  // NR estimates one regression at the single resolution k2 on the
  // layout's regression fold; the swap flag exchanges the response columns.
  FittedRegressor p_hat, b_hat;
  if (needs_p) {
    const int fold = config.kind == K::kNr ? fold_of(R::kBFit) : fold_of(R::kPFit);
    const FittedDensity* fd =
        weight_mode == WeightMode::kEstimatedDensity
            ? (config.kind == K::kNr ? &density_b : &density_p)
            : nullptr;
    const DyadicResolution res = config.kind == K::kNr ? config.k2 : config.k1;
    p_hat = fit_regression(data, fold, ResponseColumn::kA, res, weight_mode,
                           &dgp, fd);
  }
  if (needs_b) {
    const FittedDensity* fd =
        weight_mode == WeightMode::kEstimatedDensity ? &density_b : nullptr;
    b_hat = fit_regression(data, fold_of(R::kBFit), ResponseColumn::kY,
                           config.k2, weight_mode, &dgp, fd);
  }

  switch (config.kind) {
    case K::kInt: {
      const double mean_ay = fold_mean(data, fold_of(R::kAyMean), [&](std::int64_t i) {
        return data.as[static_cast<std::size_t>(i)] * data.ys[static_cast<std::size_t>(i)];
      });
      PiecewiseConstantFn product = multiply(p_hat.as_piecewise(), b_hat.as_piecewise());
      if (config.density_mode == DensityMode::kKnownBounded)
        product = multiply(product, *dgp.known_density);
      else if (config.density_mode == DensityMode::kUnknown)
        product = multiply(product,
                           PiecewiseConstantFn{density_int.res, density_int.cell_values});
      return mean_ay - product.integral();
    }
    case K::kMc: {
      const double mean_ay = fold_mean(data, fold_of(R::kAyMean), [&](std::int64_t i) {
        return data.as[static_cast<std::size_t>(i)] * data.ys[static_cast<std::size_t>(i)];
      });
      const double mean_pb = fold_mean(data, fold_of(R::kMcEval), [&](std::int64_t i) {
        const auto x = data.x_row(i);
        return p_hat.eval(x) * b_hat.eval(x);
      });
      return mean_ay - mean_pb;
    }
    case K::kNr:
      return fold_mean(data, fold_of(R::kIfEval), [&](std::int64_t i) {
        const auto x = data.x_row(i);
        const double a = data.as[static_cast<std::size_t>(i)];
        const double y = data.ys[static_cast<std::size_t>(i)];
        return config.swap_nr ? y * (a - p_hat.eval(x)) : a * (y - b_hat.eval(x));
      });
    case K::kIf:
      return fold_mean(data, fold_of(R::kIfEval), [&](std::int64_t i) {
        const auto x = data.x_row(i);
        const double a = data.as[static_cast<std::size_t>(i)];
        const double y = data.ys[static_cast<std::size_t>(i)];
        return (a - p_hat.eval(x)) * (y - b_hat.eval(x));
      });
  }
  throw std::invalid_argument("estimate: bad estimator kind");
}

}  // namespace

double estimate(const EstimatorConfig& config, const Dataset& data,
                const Dgp& dgp) {
  return estimate_rotated(config, data, dgp, 0);
}

double cross_fit(const EstimatorConfig& config, const Dataset& data,
                 const Dgp& dgp) {
  require(config.scheme != SplitScheme::kNone,
          "cross_fit: no-split estimates have nothing to rotate");
  const FoldLayout layout =
      fold_layout(config.kind, config.scheme, config.density_mode);
  double sum = 0.0;
  for (int r = 0; r < layout.m; ++r)
    sum += estimate_rotated(config, data, dgp, r);
  return sum / static_cast<double>(layout.m);
}

double run_estimator(const EstimatorConfig& config, const Dataset& data,
                     const Dgp& dgp) {
  return config.cross_fit ? cross_fit(config, data, dgp) : estimate(config, data, dgp);
}

}  // namespace haarcov
