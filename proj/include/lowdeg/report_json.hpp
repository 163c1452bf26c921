// JSON views of reports. Exact rationals are written as "p/q" strings next
// to their double approximations.
#pragma once

#include "lowdeg/advantage.hpp"
#include "lowdeg/stats.hpp"

#include <json.hpp>

#include <cmath>

namespace lowdeg {

inline nlohmann::json rational_json(const Rational& r) { return {{"exact", r.get_str()}, {"value", to_double(r)}}; }

// JSON has no infinity; an unbounded value becomes null.
inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const AdvantageReport& r) {
  nlohmann::json contrib = nlohmann::json::array();
  for (const auto& [key, value] : r.contributions)
    contrib.push_back({{"d", key.first}, {"v", key.second}, {"sum", value.get_str()}, {"value", to_double(value)}});
  nlohmann::json out = {
      {"mode", mode_name(r.mode)},
      {"n", r.n},
      {"D", r.D},
      {"total_bound", r.total_bound},
      {"total_bound_sq", rational_json(r.total_sq)},
      {"contributions", contrib},
      {"M_hat", r.M_hat},
      {"M_tilde", r.M_tilde},
      {"C", r.C.get_str()},
      {"series_bound", finite_or_null(r.series_bound)},
      {"series_bound_finite", std::isfinite(r.series_bound)},
      {"forests_dropped", r.forests_dropped},
      {"classes_evaluated", r.classes_evaluated},
  };
  if (r.mode == Mode::binary) {
    out["tau0"] = r.tau0.get_str();
    out["tau1"] = r.tau1.get_str();
  }
  out["oracle"] = r.oracle ? nlohmann::json(*r.oracle) : nlohmann::json(nullptr);
  return out;
}

inline nlohmann::json to_json(const TestStatReport& r) {
  auto side = [](const AnalyticMoments& a, const EmpiricalMoments& e) {
    return nlohmann::json{{"analytic_mean", rational_json(a.mean)},
                          {"analytic_var_bound", rational_json(a.var_bound)},
                          {"empirical_mean", e.mean},
                          {"empirical_var", e.var}};
  };
  return {{"statistic", statistic_name(r.statistic)},
          {"reps", r.reps},
          {"P", side(r.analytic_p, r.empirical_p)},
          {"Q", side(r.analytic_q, r.empirical_q)},
          {"threshold", r.threshold},
          {"separation_ratio", finite_or_null(r.separation_ratio)},
          {"error_rate", r.error_rate}};
}

}  // namespace lowdeg
