// SPDX-License-Identifier: MIT
//
// One-time fixture generator. Outputs are committed under tests/fixtures/
// with provenance fields and regenerated only by rerunning this tool:
//
//   --bias-signs    brute-force Monte-Carlo estimate of the finite-n bias of
//                   every (estimator, scheme) on a small constant-nuisance
//                   problem, recording the SIGN (and magnitude) each exact
//                   bias formula must reproduce;
//   --regime-golden achievability and tuning-flag masks over a 50x50
//                   smoothness grid, the regression baseline for the regime
//                   layer.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "haarcov/csvio.hpp"
#include "haarcov/estimator.hpp"
#include "haarcov/model.hpp"
#include "haarcov/regime.hpp"
#include "haarcov/rng.hpp"

namespace {

using namespace haarcov;
using nlohmann::json;

constexpr std::uint64_t kSeed = 20260818;
constexpr int kReplications = 1000000;
constexpr std::int64_t kFoldN = 8;
constexpr int kLevel = 2;  // k1 = k2 = 4

std::vector<std::pair<EstimatorKind, SplitScheme>> all_combos() {
  std::vector<std::pair<EstimatorKind, SplitScheme>> combos;
  for (EstimatorKind kind :
       {EstimatorKind::kInt, EstimatorKind::kMc, EstimatorKind::kNr, EstimatorKind::kIf}) {
    for (SplitScheme scheme :
         {SplitScheme::kNone, SplitScheme::kSingle, SplitScheme::kDouble}) {
      if (kind == EstimatorKind::kNr && scheme == SplitScheme::kDouble) continue;
      combos.emplace_back(kind, scheme);
    }
  }
  return combos;
}

json make_bias_signs() {
  const Dgp dgp = constant_dgp(0.5, 0.5, 0.05);
  json rows = json::array();
  std::uint64_t combo_index = 0;
  for (const auto& [kind, scheme] : all_combos()) {
    EstimatorConfig cfg;
    cfg.kind = kind;
    cfg.scheme = scheme;
    cfg.k1 = DyadicResolution::from_level(kLevel, 1);
    cfg.k2 = DyadicResolution::from_level(kLevel, 1);
    const FoldLayout layout = fold_layout(kind, scheme, DensityMode::kUniform);
    const std::int64_t total_n = layout.m * kFoldN;

    double sum = 0.0, sumsq = 0.0;
    for (int rep = 0; rep < kReplications; ++rep) {
      RngStream rng = RngStream::derive(kSeed, combo_index, static_cast<std::uint64_t>(rep));
      Dataset data = sample(dgp, total_n, rng);
      data.assign_folds(layout.m);
      const double est = run_estimator(cfg, data, dgp);
      sum += est;
      sumsq += est * est;
    }
    const double mean = sum / kReplications;
    const double var = (sumsq - kReplications * mean * mean) / (kReplications - 1);
    const double bias = mean - true_psi(dgp);
    const double se = std::sqrt(var / kReplications);
    const int sign = std::abs(bias) < 5.0 * se ? 0 : (bias > 0.0 ? 1 : -1);
    rows.push_back(json{{"kind", to_string(kind)},
                        {"scheme", to_string(scheme)},
                        {"empBias", bias},
                        {"stderr", se},
                        {"sign", sign}});
    std::printf("%-4s %-6s bias=% .8f stderr=%.8f sign=%+d\n", to_string(kind),
                to_string(scheme), bias, se, sign);
    ++combo_index;
  }
  return json{{"provenance",
               json{{"script", "tools/make_fixtures.cpp --bias-signs"},
                    {"seed", kSeed},
                    {"replications", kReplications},
                    {"foldSize", kFoldN},
                    {"k1", 4},
                    {"k2", 4},
                    {"dgp", "constant p0=0.5 b0=0.5 rho=0.05 (c=0.30)"},
                    {"signRule", "0 when |empBias| < 5*stderr, else sign(empBias)"}}},
              {"rows", rows}};
}

json make_regime_golden() {
  constexpr int kGrid = 50;
  std::vector<double> grid(kGrid);
  for (int i = 0; i < kGrid; ++i) grid[static_cast<std::size_t>(i)] = (i + 0.5) / kGrid;

  json masks = json::object();
  for (const auto& [kind, scheme] : all_combos()) {
    std::string achievable, under_k1, under_k2, over_k1, over_k2, pred_opt;
    for (double alpha : grid) {
      for (double beta : grid) {
        const RegimeReport report = regime_report(alpha, beta, 1, 4096);
        const EstimatorRegime& e = report.entry(kind, scheme);
        achievable += e.achievable ? '1' : '0';
        under_k1 += e.undersmooth_k1 ? '1' : '0';
        under_k2 += e.undersmooth_k2 ? '1' : '0';
        over_k1 += e.oversmooth_k1 ? '1' : '0';
        over_k2 += e.oversmooth_k2 ? '1' : '0';
        pred_opt += e.pred_optimal_sufficient ? '1' : '0';
      }
    }
    const std::string key = std::string(to_string(kind)) + "/" + to_string(scheme);
    masks[key] = json{{"achievable", achievable}, {"underK1", under_k1},
                      {"underK2", under_k2},     {"overK1", over_k1},
                      {"overK2", over_k2},       {"predOptimalSufficient", pred_opt}};
  }
  return json{{"provenance",
               json{{"script", "tools/make_fixtures.cpp --regime-golden"},
                    {"grid", "alpha_i = beta_i = (i + 0.5)/50, i = 0..49"},
                    {"dim", 1},
                    {"n", 4096},
                    {"order", "row-major over (alpha index, beta index)"}}},
              {"grid", grid},
              {"masks", masks}};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "";
  const std::string out = argc > 2 ? argv[2] : "";
  if (mode == "--bias-signs") {
    write_text_atomic(out.empty() ? "tests/fixtures/bias_signs.json" : out,
                      make_bias_signs().dump(2) + "\n");
    return 0;
  }
  if (mode == "--regime-golden") {
    write_text_atomic(out.empty() ? "tests/fixtures/regime_golden_d1.json" : out,
                      make_regime_golden().dump(2) + "\n");
    return 0;
  }
  std::fprintf(stderr, "usage: make_fixtures --bias-signs|--regime-golden [out.json]\n");
  return 2;
}
