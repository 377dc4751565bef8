// SPDX-License-Identifier: MIT
#include "haarcov/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "haarcov/config.hpp"

namespace haarcov {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json slope_to_json(const SlopeFit& fit) {
  return json{{"valid", fit.valid},       {"slope", fit.slope},
              {"stderr", fit.std_error},  {"intercept", fit.intercept},
              {"pointsUsed", fit.points_used}, {"flooredNs", fit.floored_ns}};
}

json regime_row(const RegimeReport& report, const EstimatorRegime& e) {
  return json{{"alpha", report.alpha},
              {"beta", report.beta},
              {"kind", to_string(e.kind)},
              {"scheme", to_string(e.scheme)},
              {"achievable", e.achievable},
              {"bestExponent", e.best_exponent},
              {"minimaxExponent", report.minimax_exponent},
              {"k1Rule", e.k1_rule.describe()},
              {"k2Rule", e.k2_rule.describe()},
              {"k1", e.k1.size},
              {"k2", e.k2.size},
              {"underK1", e.undersmooth_k1},
              {"underK2", e.undersmooth_k2},
              {"overK1", e.oversmooth_k1},
              {"overK2", e.oversmooth_k2},
              {"predOptimalSufficient", e.pred_optimal_sufficient}};
}

}  // namespace

std::string rate_result_csv(const RateResult& result) {
  std::ostringstream os;
  os << "n,mean,bias,var,mse,stderr\n";
  for (const RatePoint& pt : result.points) {
    os << pt.n << ',' << num(pt.mean_estimate) << ',' << num(pt.emp_bias) << ','
       << num(pt.emp_variance) << ',' << num(pt.emp_mse) << ',' << num(pt.std_error) << '\n';
  }
  return os.str();
}

std::string rate_result_json(const RateResult& result, const TheoryVerdict* verdict) {
  json points = json::array();
  for (const RatePoint& pt : result.points) {
    points.push_back(json{{"n", pt.n},
                          {"mean", pt.mean_estimate},
                          {"bias", pt.emp_bias},
                          {"var", pt.emp_variance},
                          {"mse", pt.emp_mse},
                          {"stderr", pt.std_error},
                          {"k1", pt.k1.size},
                          {"k2", pt.k2.size}});
  }
  json doc{{"spec", json::parse(experiment_to_json(result.spec))},
           {"trueValue", result.true_value},
           {"points", points},
           {"biasSlope", slope_to_json(result.bias_slope)},
           {"varSlope", slope_to_json(result.var_slope)},
           {"mseSlope", slope_to_json(result.mse_slope)}};
  if (verdict != nullptr) {
    doc["verdict"] = json{{"fitted", verdict->fitted},
                          {"theoretical", verdict->theoretical},
                          {"gap", verdict->gap},
                          {"tolerance", verdict->tolerance},
                          {"pass", verdict->pass}};
  }
  return doc.dump(2) + "\n";
}

std::string regime_map_csv(const std::vector<double>& alphas, const std::vector<double>& betas,
                           int dim, std::int64_t n,
                           const std::vector<std::pair<EstimatorKind, SplitScheme>>& combos) {
  std::ostringstream os;
  os << "alpha,beta,kind,scheme,achievable,bestExponent,minimaxExponent,"
        "k1Rule,k2Rule,k1,k2,underK1,underK2,overK1,overK2,predOptimalSufficient\n";
  for (double alpha : alphas) {
    for (double beta : betas) {
      const RegimeReport report = regime_report(alpha, beta, dim, n);
      for (const auto& [kind, scheme] : combos) {
        const EstimatorRegime& e = report.entry(kind, scheme);
        os << num(alpha) << ',' << num(beta) << ',' << to_string(e.kind) << ','
           << to_string(e.scheme) << ',' << (e.achievable ? 1 : 0) << ','
           << num(e.best_exponent) << ',' << num(report.minimax_exponent) << ','
           << e.k1_rule.describe() << ',' << e.k2_rule.describe() << ',' << e.k1.size << ','
           << e.k2.size << ',' << (e.undersmooth_k1 ? 1 : 0) << ','
           << (e.undersmooth_k2 ? 1 : 0) << ',' << (e.oversmooth_k1 ? 1 : 0) << ','
           << (e.oversmooth_k2 ? 1 : 0) << ',' << (e.pred_optimal_sufficient ? 1 : 0) << '\n';
      }
    }
  }
  return os.str();
}

std::string regime_map_json(const std::vector<double>& alphas, const std::vector<double>& betas,
                            int dim, std::int64_t n,
                            const std::vector<std::pair<EstimatorKind, SplitScheme>>& combos) {
  json rows = json::array();
  for (double alpha : alphas) {
    for (double beta : betas) {
      const RegimeReport report = regime_report(alpha, beta, dim, n);
      for (const auto& [kind, scheme] : combos) {
        rows.push_back(regime_row(report, report.entry(kind, scheme)));
      }
    }
  }
  return rows.dump(2) + "\n";
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

}  // namespace haarcov
