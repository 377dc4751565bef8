// SPDX-License-Identifier: MIT
//
// Result persistence: CSV/JSON renderings of experiment and regime outputs,
// plus atomic file writes (temp + rename) so partial results never appear at
// the target path. CSV is UTF-8, '.' decimal separator, '\n' line endings,
// numbers at full round-trip precision (%.17g).
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "haarcov/ratelab.hpp"
#include "haarcov/regime.hpp"

namespace haarcov {

// Columns: n, mean, bias, var, mse, stderr (one row per grid point).
std::string rate_result_csv(const RateResult& result);

// Full record: spec echo, per-n points (with resolutions), slope fits, and
// the theory verdict when one was computed.
std::string rate_result_json(const RateResult& result, const TheoryVerdict* verdict);

// One row per (alpha, beta) per requested (kind, scheme) combination.
// Columns: alpha, beta, kind, scheme, achievable, bestExponent,
// minimaxExponent, k1Rule, k2Rule, k1, k2, underK1, underK2, overK1, overK2,
// predOptimalSufficient.
std::string regime_map_csv(const std::vector<double>& alphas, const std::vector<double>& betas,
                           int dim, std::int64_t n,
                           const std::vector<std::pair<EstimatorKind, SplitScheme>>& combos);

// The same rows as an array of JSON objects.
std::string regime_map_json(const std::vector<double>& alphas, const std::vector<double>& betas,
                            int dim, std::int64_t n,
                            const std::vector<std::pair<EstimatorKind, SplitScheme>>& combos);

// Writes to path + ".tmp" then renames onto path; throws std::runtime_error
// if any step fails (the temp file is removed on failure).
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace haarcov
