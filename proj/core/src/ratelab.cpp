// SPDX-License-Identifier: MIT
#include "haarcov/ratelab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "haarcov/nuisance.hpp"
#include "haarcov/rng.hpp"

namespace haarcov {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// Resolutions for one grid point. The tuner sees the per-fold size n, which
// is the sample size each nuisance fit actually receives.
std::pair<DyadicResolution, DyadicResolution> resolve_resolutions(
    const ExperimentSpec& spec, std::int64_t n) {
  const Dgp& dgp = spec.dgp;
  switch (spec.tuner) {
    case TunerRule::kFixed: {
      require(spec.estimator.k1.dim == dgp.dim && spec.estimator.k2.dim == dgp.dim,
              "fixed resolutions must match the model dimension");
      return {spec.estimator.k1, spec.estimator.k2};
    }
    case TunerRule::kPredictionOptimal: {
      const double alpha = dgp.p_fn.smoothness;
      const double beta = dgp.b_fn.smoothness;
      if (spec.estimator.kind == EstimatorKind::kNr) {
        // NR fits a single regression; both slots carry its resolution.
        const double s = spec.estimator.swap_nr ? alpha : beta;
        DyadicResolution k = prediction_optimal_k(s, n, dgp.dim, spec.pred_c2);
        return {k, k};
      }
      return {prediction_optimal_k(alpha, n, dgp.dim, spec.pred_c1),
              prediction_optimal_k(beta, n, dgp.dim, spec.pred_c2)};
    }
    case TunerRule::kMinimaxOptimal:
      return minimax_resolution(spec.estimator.kind, spec.estimator.scheme,
                                dgp.p_fn.smoothness, dgp.b_fn.smoothness,
                                dgp.dim, n);
  }
  throw std::logic_error("unhandled tuner rule");
}

SlopeFit guarded_fit(const std::vector<std::pair<double, double>>& pts) {
  SlopeFit fit;
  std::vector<std::pair<double, double>> usable;
  for (const auto& p : pts) {
    if (p.second > 0.0 && std::isfinite(p.second)) usable.push_back(p);
  }
  if (usable.size() < 2) return fit;  // valid = false
  return fit_loglog_slope(usable);
}

}  // namespace

const char* to_string(TunerRule rule) {
  switch (rule) {
    case TunerRule::kFixed: return "fixed";
    case TunerRule::kPredictionOptimal: return "prediction_optimal";
    case TunerRule::kMinimaxOptimal: return "minimax";
  }
  throw std::logic_error("unhandled tuner rule");
}

TunerRule parse_tuner_rule(const std::string& s) {
  if (s == "fixed") return TunerRule::kFixed;
  if (s == "prediction_optimal") return TunerRule::kPredictionOptimal;
  if (s == "minimax") return TunerRule::kMinimaxOptimal;
  throw std::invalid_argument("unknown tuner rule: " + s);
}

void validate(const ExperimentSpec& spec) {
  require(!spec.n_grid.empty() && spec.n_grid.size() >= 2,
          "n_grid needs at least two points");
  for (std::size_t i = 0; i < spec.n_grid.size(); ++i) {
    require(spec.n_grid[i] >= 2, "n_grid entries must be >= 2");
    if (i > 0) {
      require(spec.n_grid[i] > spec.n_grid[i - 1], "n_grid must be strictly increasing");
    }
  }
  require(spec.replications >= 100, "replications must be >= 100");
  require(spec.threads >= 1, "threads must be >= 1");
  require(spec.slope_tolerance > 0.0, "slope_tolerance must be positive");
  require(spec.pred_c1 > 0.0 && spec.pred_c2 > 0.0, "tuner constants must be positive");
}

RateResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const Dgp& dgp = spec.dgp;
  const FoldLayout layout =
      fold_layout(spec.estimator.kind, spec.estimator.scheme, spec.estimator.density_mode);
  const int m = layout.m;
  const int reps = spec.replications;
  const int threads = std::min<int>(spec.threads, reps);

  RateResult result;
  result.spec = spec;
  result.true_value = true_psi(dgp);

  for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni) {
    const std::int64_t n = spec.n_grid[ni];
    const auto [k1, k2] = resolve_resolutions(spec, n);
    EstimatorConfig cfg = spec.estimator;
    cfg.k1 = k1;
    cfg.k2 = k2;
    const std::int64_t total_n = static_cast<std::int64_t>(m) * n;

    std::vector<double> estimates(static_cast<std::size_t>(reps), 0.0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    auto worker = [&](int t) {
      const int lo = static_cast<int>(static_cast<std::int64_t>(reps) * t / threads);
      const int hi = static_cast<int>(static_cast<std::int64_t>(reps) * (t + 1) / threads);
      try {
        for (int rep = lo; rep < hi; ++rep) {
          RngStream rng = RngStream::derive(spec.seed, static_cast<std::uint64_t>(ni),
                                            static_cast<std::uint64_t>(rep));
          Dataset data = sample(dgp, total_n, rng);
          data.assign_folds(m);
          estimates[static_cast<std::size_t>(rep)] = run_estimator(cfg, data, dgp);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(threads));
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
    for (int rep = 0; rep < reps; ++rep) {
      if (!std::isfinite(estimates[static_cast<std::size_t>(rep)])) {
        std::ostringstream os;
        os << "nonfinite estimate: n=" << n << " replication=" << rep
           << " kind=" << to_string(cfg.kind) << " scheme=" << to_string(cfg.scheme);
        throw std::runtime_error(os.str());
      }
    }

    // Ordered reduction by replication index: bit-identical for any thread count.
    double sum = 0.0;
    for (double e : estimates) sum += e;
    const double mean = sum / reps;
    double ss_mean = 0.0;
    double ss_true = 0.0;
    for (double e : estimates) {
      ss_mean += (e - mean) * (e - mean);
      ss_true += (e - result.true_value) * (e - result.true_value);
    }
    RatePoint pt;
    pt.n = n;
    pt.mean_estimate = mean;
    pt.emp_bias = mean - result.true_value;
    pt.emp_variance = ss_mean / (reps - 1);
    pt.emp_mse = ss_true / reps;
    pt.std_error = std::sqrt(pt.emp_variance / reps);
    pt.k1 = k1;
    pt.k2 = k2;

    const double recombined =
        pt.emp_bias * pt.emp_bias + pt.emp_variance * (reps - 1.0) / reps;
    if (std::abs(pt.emp_mse - recombined) > 1e-10 * std::max(1.0, std::abs(pt.emp_mse))) {
      throw std::logic_error("MSE decomposition identity violated");
    }
    result.points.push_back(pt);
  }

  std::vector<std::pair<double, double>> mse_pts, var_pts, bias_pts;
  for (const auto& pt : result.points) {
    const double dn = static_cast<double>(pt.n);
    mse_pts.emplace_back(dn, pt.emp_mse);
    var_pts.emplace_back(dn, pt.emp_variance);
    // |bias| indistinguishable from Monte-Carlo noise would corrupt the fit:
    // floor at 3 standard errors and exclude floored points.
    if (std::abs(pt.emp_bias) > 3.0 * pt.std_error) {
      bias_pts.emplace_back(dn, std::abs(pt.emp_bias));
    } else {
      result.bias_slope.floored_ns.push_back(pt.n);
    }
  }
  const auto floored = result.bias_slope.floored_ns;
  result.mse_slope = guarded_fit(mse_pts);
  result.var_slope = guarded_fit(var_pts);
  result.bias_slope = guarded_fit(bias_pts);
  result.bias_slope.floored_ns = floored;
  return result;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("slope fit needs >= 2 points");
  const int m = static_cast<int>(points.size());
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first <= 0.0 || points[i].second <= 0.0) {
      throw std::invalid_argument("slope fit needs positive coordinates");
    }
    xs[i] = std::log(points[i].first);
    ys[i] = std::log(points[i].second);
  }
  double xbar = 0.0, ybar = 0.0;
  for (int i = 0; i < m; ++i) {
    xbar += xs[static_cast<std::size_t>(i)];
    ybar += ys[static_cast<std::size_t>(i)];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    const double dx = xs[static_cast<std::size_t>(i)] - xbar;
    sxx += dx * dx;
    sxy += dx * (ys[static_cast<std::size_t>(i)] - ybar);
  }
  if (sxx <= 0.0) throw std::invalid_argument("slope fit needs distinct n values");

  SlopeFit fit;
  fit.valid = true;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.points_used = m;
  if (m > 2) {
    double rss = 0.0;
    for (int i = 0; i < m; ++i) {
      const double resid = ys[static_cast<std::size_t>(i)] -
                           (fit.intercept + fit.slope * xs[static_cast<std::size_t>(i)]);
      rss += resid * resid;
    }
    fit.std_error = std::sqrt(rss / (m - 2) / sxx);
  }
  return fit;
}

TheoryVerdict compare_to_theory(const RateResult& result, const RegimeReport& report) {
  if (result.points.empty()) {
    throw std::invalid_argument("cannot compare an empty experiment to theory");
  }
  if (!result.mse_slope.valid) {
    throw std::invalid_argument("MSE slope unavailable; cannot compare to theory");
  }
  const EstimatorRegime& entry =
      report.entry(result.spec.estimator.kind, result.spec.estimator.scheme);
  TheoryVerdict verdict;
  verdict.fitted = result.mse_slope.slope;
  verdict.theoretical = -entry.best_exponent;
  verdict.gap = std::abs(verdict.fitted - verdict.theoretical);
  verdict.tolerance = result.spec.slope_tolerance;
  verdict.pass = verdict.gap <= verdict.tolerance;
  return verdict;
}

}  // namespace haarcov
