// SPDX-License-Identifier: MIT
//
// The four estimators of psi = E[Cov(A,Y|X)] under no / single / double
// sample splitting, plus cyclic cross-fitting. Folds carry roles; each
// estimator display reads:
//
//   INT: mean_{ayMean} A_i Y_i  -  integral of p_hat * b_hat (* density)
//   MC:  mean_{ayMean} A_i Y_i  -  mean_{mcEval} p_hat(X_i) * b_hat(X_i)
//   NR:  mean_{ifEval} A_i * (Y_i - b_hat(X_i))        (swap exchanges A, Y)
//   IF:  mean_{ifEval} (A_i - p_hat(X_i)) * (Y_i - b_hat(X_i))
//
// The INT integral is exact (piecewise-constant products integrate in closed
// form). Unknown-density mode adds inverse-density weights from dedicated
// density folds and forbids no-split / single-split layouts.
#pragma once

#include <string>
#include <vector>

#include "haarcov/dyadic.hpp"
#include "haarcov/model.hpp"
#include "haarcov/nuisance.hpp"

namespace haarcov {

enum class EstimatorKind { kInt, kMc, kNr, kIf };
enum class SplitScheme { kNone, kSingle, kDouble };

// Stable identifiers used in config files and CSV output.
const char* to_string(EstimatorKind kind);   // "INT" | "MC" | "NR" | "IF"
const char* to_string(SplitScheme scheme);   // "none" | "single" | "double"
const char* to_string(DensityMode mode);     // "uniform" | "known" | "unknown"
EstimatorKind parse_estimator_kind(const std::string& s);
SplitScheme parse_split_scheme(const std::string& s);
DensityMode parse_density_mode(const std::string& s);

enum class FoldRole {
  kPFit,                // fit p_hat
  kBFit,                // fit b_hat (the regression fold for NR)
  kPDensityFit,         // fit the density weighting p_hat's fold
  kBDensityFit,         // fit the density weighting b_hat's fold
  kIntegralDensityFit,  // fit the density entering INT's integral
  kAyMean,              // average A_i * Y_i
  kMcEval,              // Monte Carlo average of p_hat * b_hat
  kIfEval,              // residual-product average (NR and IF)
};

struct FoldLayout {
  int m = 0;
  std::vector<std::vector<FoldRole>> roles;  // roles of fold 0..m-1

  bool has(FoldRole role) const;
  int fold_for(FoldRole role) const;  // throws std::invalid_argument if absent
};

// Role table per estimator / scheme / density mode. Throws
// std::invalid_argument for invalid combinations: NR has no double-split
// variant, and unknown density requires double splitting.
FoldLayout fold_layout(EstimatorKind kind, SplitScheme scheme, DensityMode mode);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::kIf;
  SplitScheme scheme = SplitScheme::kDouble;
  DyadicResolution k1;  // resolution of p_hat (ignored by NR)
  DyadicResolution k2;  // resolution of b_hat (the single NR resolution)
  bool cross_fit = false;
  bool swap_nr = false;  // NR only: exchange the roles of A and Y
  DensityMode density_mode = DensityMode::kUniform;
  double gamma = 0.0;      // assumed density smoothness (unknown mode);
                           // 0 means: take the DGP's gamma
  double density_c = 1.0;  // constant in the density resolution rule
  double clamp_lo = 0.1;   // density clamp bounds [m1, m2]
  double clamp_hi = 10.0;
};

// One estimate with the identity fold-role assignment. The dataset's fold
// count must equal fold_layout(...).m; rows left unassigned by truncation are
// ignored. Throws std::invalid_argument on invalid configuration and
// mismatched dimensions or fold counts.
double estimate(const EstimatorConfig& config, const Dataset& data,
                const Dgp& dgp);

// Average of estimate over the m cyclic rotations of fold roles.
// Requires scheme != NoSplit.
double cross_fit(const EstimatorConfig& config, const Dataset& data,
                 const Dgp& dgp);

// Dispatches on config.cross_fit.
double run_estimator(const EstimatorConfig& config, const Dataset& data,
                     const Dgp& dgp);

}  // namespace haarcov
