// Experiment configuration (JSON). Schema: docs/config.md.
#pragma once

#include "lowdeg/advantage.hpp"
#include "lowdeg/models.hpp"
#include "lowdeg/rng.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lowdeg {

/// Schema violation; `path` names the offending field, e.g. "P.x[1]".
class config_error : public std::runtime_error {
 public:
  config_error(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SweepGrid {
  std::vector<Rational> signal;  // lambda (gaussian) or s (binary)
  std::vector<Rational> k;
  bool simulate = false;
};

struct ExperimentConfig {
  Mode mode = Mode::gaussian;
  GaussianParams gauss_p, gauss_q;
  BinaryParams bin_p, bin_q;
  int D = 4;
  int reps = 200;
  std::uint64_t seed = 0;
  std::optional<std::string> catalog_dir;
  std::optional<SweepGrid> sweep;
  nlohmann::json resolved;  // input with defaults and the effective seed

  /// FNV-1a of the resolved config, as 16 hex digits.
  std::string fingerprint() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng::fnv1a(resolved.dump())));
    return buf;
  }
};

namespace detail {

// Accepts "p/q", decimal strings, and JSON numbers (read back through the
// shortest round-trip decimal, so 0.1 means 1/10).
inline Rational json_rational(const nlohmann::json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()), 10);
    if (j.is_number_float()) return rational_from_decimal_double(j.get<double>());
  } catch (const std::exception& e) {
    throw config_error(path, e.what());
  }
  throw config_error(path, "expected a number or a \"p/q\" string");
}

inline const nlohmann::json* lookup(const nlohmann::json& model, const nlohmann::json& root, const char* key) {
  if (model.contains(key)) return &model[key];
  if (root.contains(key)) return &root[key];
  return nullptr;
}

inline Rational need_rational(const nlohmann::json& model, const nlohmann::json& root, const char* key,
                              const std::string& who) {
  if (model.contains(key)) return json_rational(model[key], who + "." + key);
  if (root.contains(key)) return json_rational(root[key], key);
  throw config_error(who + "." + key, "missing (set it in " + who + " or at the top level)");
}

inline std::int64_t need_int(const nlohmann::json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw config_error(path, "missing");
  if (!j[key].is_number_integer()) throw config_error(path, "expected an integer");
  return j[key].get<std::int64_t>();
}

inline std::vector<Rational> proportions(const nlohmann::json& model, const std::string& who) {
  if (model.contains("x")) {
    const auto& x = model["x"];
    if (!x.is_array() || x.empty()) throw config_error(who + ".x", "expected a non-empty array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back(json_rational(x[i], who + ".x[" + std::to_string(i) + "]"));
    return out;
  }
  if (model.contains("M")) {
    if (!model["M"].is_number_integer() || model["M"].get<int>() < 1) throw config_error(who + ".M", "expected an integer >= 1");
    const int M = model["M"].get<int>();
    return std::vector<Rational>(static_cast<std::size_t>(M), Rational(1, M));
  }
  throw config_error(who + ".x", "missing (give x or M)");
}

inline std::vector<Rational> rational_list(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw config_error(path, "expected a non-empty array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_rational(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

/// Builds and validates a config. `seed_override` replaces the file's seed.
inline ExperimentConfig parse_config(const nlohmann::json& root, std::optional<std::uint64_t> seed_override = {}) {
  using namespace detail;
  if (!root.is_object()) throw config_error("$", "expected a JSON object");
  ExperimentConfig cfg;
  const std::string mode = root.value("mode", std::string("gaussian"));
  if (mode == "gaussian") {
    cfg.mode = Mode::gaussian;
  } else if (mode == "binary") {
    cfg.mode = Mode::binary;
  } else {
    throw config_error("mode", "expected \"gaussian\" or \"binary\", got \"" + mode + "\"");
  }
  const std::int64_t n = need_int(root, "n", "n");
  if (root.contains("D")) {
    if (!root["D"].is_number_integer()) throw config_error("D", "expected an integer");
    cfg.D = root["D"].get<int>();
  }
  if (root.contains("reps")) {
    if (!root["reps"].is_number_integer()) throw config_error("reps", "expected an integer");
    cfg.reps = root["reps"].get<int>();
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) throw config_error("seed", "expected a non-negative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (seed_override) cfg.seed = *seed_override;
  if (root.contains("catalog_cache")) cfg.catalog_dir = root["catalog_cache"].get<std::string>();

  for (const char* who : {"P", "Q"}) {
    if (!root.contains(who) || !root[who].is_object()) throw config_error(who, "missing model block");
    const auto& m = root[who];
    const Rational k = need_rational(m, root, "k", who);
    const auto* c_field = lookup(m, root, "C");
    const Rational C = c_field ? json_rational(*c_field, std::string(who) + ".C") : Rational(1);
    const auto x = proportions(m, who);
    if (cfg.mode == Mode::gaussian) {
      GaussianParams& g = std::string(who) == "P" ? cfg.gauss_p : cfg.gauss_q;
      g = GaussianParams{n, k, need_rational(m, root, "lambda", who), x, C};
      g.validate(who);
    } else {
      BinaryParams& b = std::string(who) == "P" ? cfg.bin_p : cfg.bin_q;
      b = BinaryParams{n, k, need_rational(m, root, "q", who), need_rational(m, root, "s", who),
                       need_rational(m, root, "tau1", who), x, C};
      b.validate(who);
    }
  }

  if (root.contains("sweep")) {
    const auto& s = root["sweep"];
    SweepGrid grid;
    const char* signal = cfg.mode == Mode::gaussian ? "lambda" : "s";
    if (s.contains(signal)) grid.signal = rational_list(s[signal], std::string("sweep.") + signal);
    if (s.contains("k")) grid.k = rational_list(s["k"], "sweep.k");
    grid.simulate = s.value("simulate", false);
    if (grid.signal.empty() && grid.k.empty()) throw config_error("sweep", std::string("needs a ") + signal + " or k grid");
    cfg.sweep = grid;
  }

  cfg.resolved = root;
  cfg.resolved["seed"] = cfg.seed;
  cfg.resolved["D"] = cfg.D;
  cfg.resolved["reps"] = cfg.reps;
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = {}) {
  std::ifstream in(path);
  if (!in) throw config_error(path, "cannot open config file");
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(path, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(root, seed_override);
}

}  // namespace lowdeg
