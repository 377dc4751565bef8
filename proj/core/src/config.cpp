// SPDX-License-Identifier: MIT
#include "haarcov/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace haarcov {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("config: " + what); }

// Fail-closed key policy: every key present must be in the allowed set.
void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(std::string(where) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail("unknown key \"" + item.key() + "\" in " + where);
  }
}

const json& need(const json& obj, const char* where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(std::string(where) + " is missing required key \"" + key + "\"");
  return *it;
}

double need_number(const json& obj, const char* where, const char* key) {
  const json& v = need(obj, where, key);
  if (!v.is_number()) fail(std::string(where) + "." + key + " must be a number");
  return v.get<double>();
}

double opt_number(const json& obj, const char* where, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail(std::string(where) + "." + key + " must be a number");
  return it->get<double>();
}

std::int64_t opt_int(const json& obj, const char* where, const char* key, std::int64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) fail(std::string(where) + "." + key + " must be an integer");
  return it->get<std::int64_t>();
}

std::string need_string(const json& obj, const char* where, const char* key) {
  const json& v = need(obj, where, key);
  if (!v.is_string()) fail(std::string(where) + "." + key + " must be a string");
  return v.get<std::string>();
}

std::string opt_string(const json& obj, const char* where, const char* key,
                       const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) fail(std::string(where) + "." + key + " must be a string");
  return it->get<std::string>();
}

bool opt_bool(const json& obj, const char* where, const char* key, bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(std::string(where) + "." + key + " must be a boolean");
  return it->get<bool>();
}

WaveletSeriesFunction parse_series(const json& obj, const char* where, int dim) {
  check_keys(obj, where, {"smoothness", "amplitude", "maxLevel", "baseLevel", "offset"});
  WaveletSeriesFunction fn;
  fn.smoothness = need_number(obj, where, "smoothness");
  fn.amplitude = need_number(obj, where, "amplitude");
  fn.max_level = static_cast<int>(opt_int(obj, where, "maxLevel", 0));
  fn.base_level = static_cast<int>(opt_int(obj, where, "baseLevel", 0));
  fn.offset = need_number(obj, where, "offset");
  fn.dim = dim;
  return fn;
}

json series_to_json(const WaveletSeriesFunction& fn) {
  return json{{"smoothness", fn.smoothness},
              {"amplitude", fn.amplitude},
              {"maxLevel", fn.max_level},
              {"baseLevel", fn.base_level},
              {"offset", fn.offset}};
}

Dgp parse_dgp(const json& obj) {
  check_keys(obj, "dgp",
             {"dim", "p", "b", "rho", "sigmaA", "sigmaY", "tau", "c1", "c2", "density",
              "gamma", "knownDensity"});
  Dgp dgp;
  dgp.dim = static_cast<int>(opt_int(obj, "dgp", "dim", 1));
  if (dgp.dim < 1) fail("dgp.dim must be >= 1");
  dgp.p_fn = parse_series(need(obj, "dgp", "p"), "dgp.p", dgp.dim);
  dgp.b_fn = parse_series(need(obj, "dgp", "b"), "dgp.b", dgp.dim);
  dgp.rho = opt_number(obj, "dgp", "rho", 0.0);
  dgp.sigma_a = opt_number(obj, "dgp", "sigmaA", 0.0);
  dgp.sigma_y = opt_number(obj, "dgp", "sigmaY", 0.0);
  dgp.tau = opt_number(obj, "dgp", "tau", 0.0);
  dgp.c1 = opt_number(obj, "dgp", "c1", -2.0);
  dgp.c2 = opt_number(obj, "dgp", "c2", 2.0);
  dgp.density_mode = parse_density_mode(opt_string(obj, "dgp", "density", "uniform"));
  dgp.gamma = opt_number(obj, "dgp", "gamma", 0.0);
  if (dgp.density_mode == DensityMode::kKnownBounded) {
    const json& kd = need(obj, "dgp", "knownDensity");
    check_keys(kd, "dgp.knownDensity", {"level", "cells"});
    const int level = static_cast<int>(opt_int(kd, "dgp.knownDensity", "level", -1));
    if (level < 0) fail("dgp.knownDensity.level must be a nonnegative integer");
    const json& cells = need(kd, "dgp.knownDensity", "cells");
    if (!cells.is_array()) fail("dgp.knownDensity.cells must be an array");
    PiecewiseConstantFn f;
    f.res = DyadicResolution::from_level(level, dgp.dim);
    f.cell_values.reserve(cells.size());
    for (const auto& v : cells) {
      if (!v.is_number()) fail("dgp.knownDensity.cells entries must be numbers");
      f.cell_values.push_back(v.get<double>());
    }
    if (static_cast<std::int64_t>(f.cell_values.size()) != f.res.size) {
      fail("dgp.knownDensity.cells has the wrong length for its level");
    }
    dgp.known_density = std::move(f);
  } else if (obj.contains("knownDensity")) {
    fail("dgp.knownDensity is only valid with density == \"known\"");
  }
  validate_budget(dgp);
  return dgp;
}

json dgp_to_json(const Dgp& dgp) {
  json obj{{"dim", dgp.dim},
           {"p", series_to_json(dgp.p_fn)},
           {"b", series_to_json(dgp.b_fn)},
           {"rho", dgp.rho},
           {"sigmaA", dgp.sigma_a},
           {"sigmaY", dgp.sigma_y},
           {"tau", dgp.tau},
           {"c1", dgp.c1},
           {"c2", dgp.c2},
           {"density", to_string(dgp.density_mode)},
           {"gamma", dgp.gamma}};
  if (dgp.known_density.has_value()) {
    obj["knownDensity"] = json{{"level", dgp.known_density->res.level},
                               {"cells", dgp.known_density->cell_values}};
  }
  return obj;
}

EstimatorConfig parse_estimator(const json& obj, const Dgp& dgp) {
  check_keys(obj, "estimator",
             {"kind", "scheme", "k1Level", "k2Level", "crossFit", "swapNr", "gamma",
              "densityC", "clampLo", "clampHi"});
  EstimatorConfig cfg;
  cfg.kind = parse_estimator_kind(need_string(obj, "estimator", "kind"));
  cfg.scheme = parse_split_scheme(need_string(obj, "estimator", "scheme"));
  const int k1_level = static_cast<int>(opt_int(obj, "estimator", "k1Level", 0));
  const int k2_level = static_cast<int>(opt_int(obj, "estimator", "k2Level", 0));
  cfg.k1 = DyadicResolution::from_level(k1_level, dgp.dim);
  cfg.k2 = DyadicResolution::from_level(k2_level, dgp.dim);
  cfg.cross_fit = opt_bool(obj, "estimator", "crossFit", false);
  cfg.swap_nr = opt_bool(obj, "estimator", "swapNr", false);
  cfg.density_mode = dgp.density_mode;  // must match; not independently configurable
  cfg.gamma = opt_number(obj, "estimator", "gamma", 0.0);
  cfg.density_c = opt_number(obj, "estimator", "densityC", 1.0);
  cfg.clamp_lo = opt_number(obj, "estimator", "clampLo", 0.1);
  cfg.clamp_hi = opt_number(obj, "estimator", "clampHi", 10.0);
  return cfg;
}

json estimator_to_json(const EstimatorConfig& cfg) {
  return json{{"kind", to_string(cfg.kind)},
              {"scheme", to_string(cfg.scheme)},
              {"k1Level", cfg.k1.level},
              {"k2Level", cfg.k2.level},
              {"crossFit", cfg.cross_fit},
              {"swapNr", cfg.swap_nr},
              {"gamma", cfg.gamma},
              {"densityC", cfg.density_c},
              {"clampLo", cfg.clamp_lo},
              {"clampHi", cfg.clamp_hi}};
}

}  // namespace

ExperimentSpec parse_experiment_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& err) {
    fail(std::string("malformed JSON: ") + err.what());
  }
  check_keys(doc, "document",
             {"schema", "seed", "dgp", "estimator", "tuner", "predC1", "predC2", "nGrid",
              "replications", "slopeTolerance", "threads"});
  const std::string schema = need_string(doc, "document", "schema");
  if (schema != "v1") fail("unsupported schema version \"" + schema + "\" (expected \"v1\")");

  ExperimentSpec spec;
  spec.dgp = parse_dgp(need(doc, "document", "dgp"));
  spec.estimator = parse_estimator(need(doc, "document", "estimator"), spec.dgp);
  spec.tuner = parse_tuner_rule(opt_string(doc, "document", "tuner", "fixed"));
  spec.pred_c1 = opt_number(doc, "document", "predC1", 1.0);
  spec.pred_c2 = opt_number(doc, "document", "predC2", 1.0);
  const json& grid = need(doc, "document", "nGrid");
  if (!grid.is_array() || grid.empty()) fail("nGrid must be a nonempty array of integers");
  for (const auto& v : grid) {
    if (!v.is_number_integer()) fail("nGrid entries must be integers");
    spec.n_grid.push_back(v.get<std::int64_t>());
  }
  spec.replications = static_cast<int>(opt_int(doc, "document", "replications", 2000));
  spec.seed = static_cast<std::uint64_t>(opt_int(doc, "document", "seed", 0));
  spec.slope_tolerance = opt_number(doc, "document", "slopeTolerance", 0.15);
  spec.threads = static_cast<int>(opt_int(doc, "document", "threads", 1));
  validate(spec);
  return spec;
}

std::string experiment_to_json(const ExperimentSpec& spec) {
  json doc{{"schema", "v1"},
           {"seed", spec.seed},
           {"dgp", dgp_to_json(spec.dgp)},
           {"estimator", estimator_to_json(spec.estimator)},
           {"tuner", to_string(spec.tuner)},
           {"predC1", spec.pred_c1},
           {"predC2", spec.pred_c2},
           {"nGrid", spec.n_grid},
           {"replications", spec.replications},
           {"slopeTolerance", spec.slope_tolerance},
           {"threads", spec.threads}};
  return doc.dump(2) + "\n";
}

ExperimentSpec load_experiment_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_json(buf.str());
}

}  // namespace haarcov
