// SPDX-License-Identifier: MIT
//
// Command-line driver: rate experiments from JSON configs, regime-map
// exports, and the two self-checking verification suites (exact-oracle
// agreement and kernel-moment identities).
//
// Exit codes: 0 success, 1 test-verdict failure (a check suite found a
// violation, a --check-theory run missed its slope, or an experiment aborted
// mid-flight), 2 usage/config error.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "haarcov/config.hpp"
#include "haarcov/csvio.hpp"
#include "haarcov/estimator.hpp"
#include "haarcov/model.hpp"
#include "haarcov/oracle.hpp"
#include "haarcov/ratelab.hpp"
#include "haarcov/regime.hpp"

namespace {

using namespace haarcov;

constexpr int kExitOk = 0;
constexpr int kExitVerdictFail = 1;
constexpr int kExitUsage = 2;

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

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads_override,
            std::int64_t seed_override, bool has_seed, bool check_theory) {
  ExperimentSpec spec;
  try {
    spec = load_experiment_file(config_path);
  } catch (const std::runtime_error& err) {
    std::cerr << err.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << err.what() << "\n";
    return kExitUsage;
  }
  if (threads_override > 0) spec.threads = threads_override;
  if (has_seed) spec.seed = static_cast<std::uint64_t>(seed_override);

  RateResult result;
  try {
    result = run_experiment(spec);
  } catch (const std::invalid_argument& err) {
    std::cerr << "config: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "experiment aborted: " << err.what() << "\n";
    return kExitVerdictFail;
  }

  TheoryVerdict verdict;
  bool have_verdict = false;
  try {
    const RegimeReport report =
        regime_report(spec.dgp.p_fn.smoothness, spec.dgp.b_fn.smoothness, spec.dgp.dim,
                      spec.n_grid.back());
    verdict = compare_to_theory(result, report);
    have_verdict = true;
  } catch (const std::exception&) {
    // No MSE slope (degenerate values) or no regime entry: report without a verdict.
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << out_dir << ": " << ec.message() << "\n";
    return kExitUsage;
  }
  const std::string csv_path = (std::filesystem::path(out_dir) / "result.csv").string();
  const std::string json_path = (std::filesystem::path(out_dir) / "result.json").string();
  try {
    write_text_atomic(csv_path, rate_result_csv(result));
    write_text_atomic(json_path, rate_result_json(result, have_verdict ? &verdict : nullptr));
  } catch (const std::exception& err) {
    std::cerr << err.what() << "\n";
    return kExitVerdictFail;
  }

  for (const RatePoint& pt : result.points) {
    std::printf("n=%lld mean=%.6g bias=%.6g var=%.6g mse=%.6g stderr=%.6g k1=%lld k2=%lld\n",
                static_cast<long long>(pt.n), pt.mean_estimate, pt.emp_bias, pt.emp_variance,
                pt.emp_mse, pt.std_error, static_cast<long long>(pt.k1.size),
                static_cast<long long>(pt.k2.size));
  }
  if (result.mse_slope.valid) {
    std::printf("mse slope = %.4f (stderr %.4f)\n", result.mse_slope.slope,
                result.mse_slope.std_error);
  }
  if (have_verdict) {
    std::printf("theory: fitted %.4f vs %.4f (gap %.4f, tol %.4f) -> %s\n", verdict.fitted,
                verdict.theoretical, verdict.gap, verdict.tolerance,
                verdict.pass ? "pass" : "FAIL");
  }
  std::printf("wrote %s and %s\n", csv_path.c_str(), json_path.c_str());
  if (check_theory) {
    if (!have_verdict) {
      std::cerr << "--check-theory requested but no verdict could be computed\n";
      return kExitVerdictFail;
    }
    return verdict.pass ? kExitOk : kExitVerdictFail;
  }
  return kExitOk;
}

int cmd_regime_map(const std::vector<double>& alphas, const std::vector<double>& betas, int dim,
                   std::int64_t n, const std::string& kind_s, const std::string& scheme_s,
                   bool all, const std::string& out_dir) {
  std::vector<std::pair<EstimatorKind, SplitScheme>> combos;
  if (all) {
    combos = all_combos();
  } else {
    const EstimatorKind kind = parse_estimator_kind(kind_s);
    const SplitScheme scheme = parse_split_scheme(scheme_s);
    if (kind == EstimatorKind::kNr && scheme == SplitScheme::kDouble) {
      throw std::invalid_argument("NR has no double-split variant");
    }
    combos.emplace_back(kind, scheme);
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::invalid_argument("cannot create output directory " + out_dir + ": " +
                                ec.message());
  }
  const std::string csv_path = (std::filesystem::path(out_dir) / "regime_map.csv").string();
  const std::string json_path = (std::filesystem::path(out_dir) / "regime_map.json").string();
  write_text_atomic(csv_path, regime_map_csv(alphas, betas, dim, n, combos));
  write_text_atomic(json_path, regime_map_json(alphas, betas, dim, n, combos));
  std::printf("wrote %s and %s (%zu rows)\n", csv_path.c_str(), json_path.c_str(),
              alphas.size() * betas.size() * combos.size());
  return kExitOk;
}

int cmd_oracle_check() {
  int failures = 0;
  auto check = [&](const std::string& name, auto&& fn) {
    try {
      const double value = fn();
      std::printf("[ok]   %-58s = % .12g\n", name.c_str(), value);
    } catch (const std::exception& err) {
      std::printf("[FAIL] %-58s : %s\n", name.c_str(), err.what());
      ++failures;
    }
  };

  const Dgp rough = worst_case_dgp(0.25, 0.25, 1, 0.1, 12);
  const auto k8 = DyadicResolution::from_level(3, 1);
  const auto k32 = DyadicResolution::from_level(5, 1);
  const auto k4 = DyadicResolution::from_level(2, 1);
  check("projection bias INT (8,32) worst-case d=1",
        [&] { return oracle::exact_projection_bias(rough, k8, k32, EstimatorKind::kInt); });
  check("projection bias INT (32,8) worst-case d=1",
        [&] { return oracle::exact_projection_bias(rough, k32, k8, EstimatorKind::kInt); });
  check("projection bias IF  (8,32) worst-case d=1",
        [&] { return oracle::exact_projection_bias(rough, k8, k32, EstimatorKind::kIf); });
  check("projection bias MC  (4,4)  worst-case d=1",
        [&] { return oracle::exact_projection_bias(rough, k4, k4, EstimatorKind::kMc); });

  const Dgp rough2 = worst_case_dgp(0.3, 0.6, 2, 0.05, 6);
  const auto k4d2 = DyadicResolution::from_level(1, 2);
  const auto k64d2 = DyadicResolution::from_level(3, 2);
  check("projection bias INT (4,64) worst-case d=2", [&] {
    return oracle::exact_projection_bias(rough2, k4d2, k64d2, EstimatorKind::kInt);
  });
  check("projection bias IF  (4,64) worst-case d=2", [&] {
    return oracle::exact_projection_bias(rough2, k4d2, k64d2, EstimatorKind::kIf);
  });

  const Dgp constant = constant_dgp(0.5, 0.5, 0.05);
  const auto k64 = DyadicResolution::from_level(6, 1);
  const std::int64_t n = 512;
  check("nonlinearity bias magnitude (4,64) n=512",
        [&] { return oracle::exact_nonlinearity_bias(constant, k4, k64, n); });
  for (const auto& [kind, scheme] : all_combos()) {
    const std::string name = std::string("constant bias ") + to_string(kind) + " / " +
                             to_string(scheme) + " (4,64) n=512";
    check(name,
          [&] { return oracle::exact_constant_bias(constant, kind, scheme, k4, k64, n); });
  }
  for (EstimatorKind kind : {EstimatorKind::kNr, EstimatorKind::kIf, EstimatorKind::kMc}) {
    const std::string name =
        std::string("own-observation bias ") + to_string(kind) + " (64,64) n=512";
    check(name,
          [&] { return oracle::exact_own_observation_bias(constant, k64, k64, n, kind); });
  }

  const Dgp smooth = worst_case_dgp(0.5, 0.5, 1, 0.4, 12);
  check("integrated variance k=16 n=4096 worst-case d=1", [&] {
    return oracle::exact_integrated_variance(smooth, DyadicResolution::from_level(4, 1), 4096);
  });

  std::printf("%s\n", failures == 0 ? "oracle-check: all routes agree"
                                    : "oracle-check: ROUTE DISAGREEMENT");
  return failures == 0 ? kExitOk : kExitVerdictFail;
}

int cmd_kernel_check(int k1_level, int k2_level, int dim) {
  std::vector<std::pair<DyadicResolution, DyadicResolution>> pairs;
  if (k1_level >= 0 || k2_level >= 0) {
    if (k1_level < 0 || k2_level < 0) {
      throw std::invalid_argument("kernel-check needs both --k1-level and --k2-level");
    }
    pairs.emplace_back(DyadicResolution::from_level(k1_level, dim),
                       DyadicResolution::from_level(k2_level, dim));
  } else {
    for (auto [l1, l2] : {std::pair<int, int>{1, 1}, {3, 5}, {5, 3}, {6, 4}, {4, 4}}) {
      pairs.emplace_back(DyadicResolution::from_level(l1, 1),
                         DyadicResolution::from_level(l2, 1));
    }
    pairs.emplace_back(DyadicResolution::from_level(1, 2), DyadicResolution::from_level(2, 2));
    pairs.emplace_back(DyadicResolution::from_level(2, 2), DyadicResolution::from_level(1, 2));
  }

  bool all_ok = true;
  for (const auto& [k1, k2] : pairs) {
    const oracle::KernelMomentReport report = oracle::kernel_moment_check(k1, k2);
    std::printf("k1=%lld k2=%lld (d=%d)\n", static_cast<long long>(k1.size),
                static_cast<long long>(k2.size), k1.dim);
    for (const auto& q : report.quantities) {
      std::printf("  %-34s value=% .12g claimed=% .12g ratio=%.4f\n", q.name.c_str(), q.value,
                  q.claimed, q.ratio);
    }
    if (!report.all_within_factor_two) {
      all_ok = false;
      std::printf("  -> OUTSIDE factor-2 band\n");
    }
  }
  std::printf("%s\n", all_ok ? "kernel-check: all moments within factor 2 of claimed order"
                             : "kernel-check: VIOLATION");
  return all_ok ? kExitOk : kExitVerdictFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Haar-projection covariance-functional simulation lab"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a rate experiment from a JSON config");
  std::string config_path;
  std::string run_out = ".";
  int threads_override = 0;
  std::int64_t seed_override = 0;
  bool check_theory = false;
  run->add_option("--config", config_path, "Path to a schema-v1 experiment JSON")->required();
  run->add_option("--out", run_out, "Output directory for result.csv / result.json");
  run->add_option("--threads", threads_override, "Override the config's thread count");
  auto* seed_opt = run->add_option("--seed", seed_override, "Override the config's seed");
  run->add_flag("--check-theory", check_theory,
                "Exit 1 unless the fitted MSE slope matches theory within tolerance");

  // regime-map
  auto* rmap = app.add_subcommand("regime-map", "Export achievability/tuning regime tables");
  std::vector<double> alphas, betas;
  int dim = 1;
  std::int64_t map_n = 4096;
  std::string kind_s = "IF";
  std::string scheme_s = "double";
  bool map_all = false;
  std::string map_out = ".";
  rmap->add_option("--alpha-grid", alphas, "Comma-separated smoothness grid for p")
      ->required()
      ->delimiter(',');
  rmap->add_option("--beta-grid", betas, "Comma-separated smoothness grid for b")
      ->required()
      ->delimiter(',');
  rmap->add_option("--d", dim, "Design dimension");
  rmap->add_option("--n", map_n, "Sample size for concrete resolutions");
  rmap->add_option("--kind", kind_s, "Estimator kind (INT|MC|NR|IF)");
  rmap->add_option("--scheme", scheme_s, "Splitting scheme (none|single|double)");
  rmap->add_flag("--all", map_all, "Emit every valid (kind, scheme) combination");
  rmap->add_option("--out", map_out, "Output directory");

  // oracle-check / kernel-check
  auto* ocheck = app.add_subcommand("oracle-check", "Run the dual-route oracle agreement suite");
  auto* kcheck = app.add_subcommand("kernel-check", "Verify kernel-moment identities");
  int k1_level = -1, k2_level = -1, kdim = 1;
  kcheck->add_option("--k1-level", k1_level, "Dyadic level of the first resolution");
  kcheck->add_option("--k2-level", k2_level, "Dyadic level of the second resolution");
  kcheck->add_option("--d", kdim, "Design dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);  // --help
    std::cerr << err.what() << "\n";
    return kExitUsage;
  }

  try {
    if (run->parsed()) {
      return cmd_run(config_path, run_out, threads_override, seed_override,
                     seed_opt->count() > 0, check_theory);
    }
    if (rmap->parsed()) {
      return cmd_regime_map(alphas, betas, dim, map_n, kind_s, scheme_s, map_all, map_out);
    }
    if (ocheck->parsed()) return cmd_oracle_check();
    if (kcheck->parsed()) return cmd_kernel_check(k1_level, k2_level, kdim);
  } catch (const std::invalid_argument& err) {
    std::cerr << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << err.what() << "\n";
    return kExitVerdictFail;
  }
  return kExitUsage;
}
