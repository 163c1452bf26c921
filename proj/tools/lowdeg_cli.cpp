// lowdeg: command-line runner for catalogs, moments, r-values, advantage
// bounds, simulations and sweeps. See README.md and docs/config.md.

#include "lowdeg/lowdeg.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

namespace fs = std::filesystem;
using namespace lowdeg;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out_dir;
};

// Writes to <out>/<name> when --out is set, otherwise to stdout.
class Output {
 public:
  Output(const Common& c, const std::string& name) {
    if (c.out_dir.empty()) return;
    fs::create_directories(c.out_dir);
    path_ = (fs::path(c.out_dir) / name).string();
    file_ = std::make_unique<std::ofstream>(path_);
    if (!*file_) throw std::runtime_error("cannot write " + path_);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

ExperimentConfig need_config(const Common& c) {
  if (c.config_path.empty()) throw config_error("--config", "this subcommand needs a config file");
  return load_config(c.config_path, c.seed);
}

AdvOptions adv_options(const ExperimentConfig& cfg, const Common& c) {
  AdvOptions opt;
  opt.threads = c.threads;
  if (cfg.catalog_dir) {
    fs::create_directories(*cfg.catalog_dir);
    opt.catalog_dir = cfg.catalog_dir;
  }
  return opt;
}

nlohmann::json provenance(const ExperimentConfig& cfg) {
  return {{"fingerprint", cfg.fingerprint()}, {"seed", cfg.seed}, {"config", cfg.resolved}};
}

std::pair<PriorSpec, PriorSpec> specs(const ExperimentConfig& cfg, bool shift_free) {
  if (cfg.mode == Mode::gaussian) return {PriorSpec::gaussian(cfg.gauss_p), PriorSpec::gaussian(cfg.gauss_q)};
  PriorSpec p = PriorSpec::binary(cfg.bin_p), q = PriorSpec::binary(cfg.bin_q);
  if (shift_free && p.shift == q.shift) return {p.shift_free(), q.shift_free()};
  return {p, q};
}

AdvantageReport advantage(const ExperimentConfig& cfg, const AdvOptions& opt) {
  return cfg.mode == Mode::gaussian ? adv_bound_gaussian(cfg.gauss_p, cfg.gauss_q, cfg.D, opt)
                                    : adv_bound_binary(cfg.bin_p, cfg.bin_q, cfg.D, opt);
}

std::optional<double> oracle(const ExperimentConfig& cfg) {
  const std::int64_t n = cfg.mode == Mode::gaussian ? cfg.gauss_p.n : cfg.bin_p.n;
  if (n > kOracleMaxN || cfg.D > kOracleMaxD) return std::nullopt;
  return cfg.mode == Mode::gaussian ? exact_adv_oracle(cfg.gauss_p, cfg.gauss_q, cfg.D)
                                    : exact_adv_oracle(cfg.bin_p, cfg.bin_q, cfg.D);
}

TestStatReport simulate(const ExperimentConfig& cfg, unsigned threads) {
  return cfg.mode == Mode::gaussian ? run_experiment(cfg.gauss_p, cfg.gauss_q, cfg.reps, cfg.seed, threads)
                                    : run_experiment(cfg.bin_p, cfg.bin_q, cfg.reps, cfg.seed, threads);
}

// ---------------------------------------------------------------- commands

int cmd_enumerate(const Common& c, int d_max, bool no_loops, bool cyclic, bool simple) {
  CatalogOptions opt{d_max, !no_loops, cyclic, !simple};
  if (!c.config_path.empty()) {
    const auto cfg = need_config(c);
    if (d_max < 0) opt.d_max = cfg.D;
    if (cfg.mode == Mode::binary) opt.allow_loops = opt.allow_multi_edges = false;
  }
  if (opt.d_max < 0) throw config_error("--d-max", "missing (or give --config)");
  const auto cat = enumerate_classes(opt, c.threads);
  Output out(c, "catalog.txt");
  write_catalog(out.stream(), cat);
  std::cerr << cat.classes.size() << " classes\n";
  return 0;
}

int cmd_moments(const Common& c, long mc_reps) {
  const auto cfg = need_config(c);
  const bool binary = cfg.mode == Mode::binary;
  const auto cat = enumerate_classes(CatalogOptions{cfg.D, !binary, false, !binary}, c.threads);
  const auto [ps, qs] = specs(cfg, false);
  Output out(c, "moments.csv");
  auto& os = out.stream();
  os << "# fingerprint=" << cfg.fingerprint() << "\n";
  os << "class,d,v,model,exact,value,mc_estimate,mc_se\n";
  os.precision(12);
  std::size_t idx = 0;
  for (const auto& g : cat.classes) {
    for (const auto* s : {&ps, &qs}) {
      const Rational exact = affine_moment(g, *s).exact;
      const auto mc = mc_moment(g, *s, mc_reps, rng::derive_seed(cfg.seed, "moments", idx++));
      os << '"' << g.edge_string() << "\"," << g.d() << ',' << g.v() << ',' << (s == &ps ? 'P' : 'Q') << ','
         << exact.get_str() << ',' << to_double(exact) << ',' << mc.estimate << ',' << mc.standard_error << '\n';
    }
  }
  return 0;
}

int cmd_rvalues(const Common& c) {
  const auto cfg = need_config(c);
  const bool binary = cfg.mode == Mode::binary;
  const auto cat = enumerate_classes(CatalogOptions{cfg.D, !binary, false, !binary}, c.threads);
  const auto [ps, qs] = specs(cfg, true);
  RTable table(ps, qs);
  const Rational C = binary ? std::min(cfg.bin_p.C, cfg.bin_q.C) : std::min(cfg.gauss_p.C, cfg.gauss_q.C);
  Output out(c, "rvalues.csv");
  auto& os = out.stream();
  os << "# fingerprint=" << cfg.fingerprint() << "\n";
  os << "class,d,v,r,r_value,bound,ok\n";
  os.precision(12);
  for (const auto& g : cat.classes) {
    const Rational& r = table.r(g);
    os << '"' << g.edge_string() << "\"," << g.d() << ',' << g.v() << ',' << r.get_str() << ',' << to_double(r) << ',';
    try {
      const auto chk = r_bound_check(g, table, C);
      os << to_double(chk.bound) << ',' << (chk.ok ? "true" : "false") << '\n';
    } catch (const std::invalid_argument&) {
      os << "NA,NA\n";  // the bound needs shared lambda and k/n
    }
  }
  return 0;
}

int cmd_advantage(const Common& c, bool with_oracle) {
  const auto cfg = need_config(c);
  auto rep = advantage(cfg, adv_options(cfg, c));
  if (with_oracle) rep.oracle = oracle(cfg);
  auto j = to_json(rep);
  j["provenance"] = provenance(cfg);
  Output out(c, "advantage.json");
  out.stream() << j.dump(2) << '\n';
  return 0;
}

int cmd_oracle(const Common& c) {
  const auto cfg = need_config(c);
  const auto value = oracle(cfg);
  if (!value)
    throw size_limit_error("oracle: needs n <= " + std::to_string(kOracleMaxN) + " and D <= " + std::to_string(kOracleMaxD));
  const auto rep = advantage(cfg, adv_options(cfg, c));
  nlohmann::json j = {{"mode", mode_name(cfg.mode)}, {"D", cfg.D},       {"oracle", *value},
                      {"bound", rep.total_bound},    {"provenance", provenance(cfg)}};
  Output out(c, "oracle.json");
  out.stream() << j.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const Common& c) {
  const auto cfg = need_config(c);
  const auto rep = simulate(cfg, c.threads);
  {
    Output out(c, "simulate_reps.csv");
    auto& os = out.stream();
    os << "# fingerprint=" << cfg.fingerprint() << "\n";
    os << "rep,model,value\n";
    os.precision(17);
    for (std::size_t r = 0; r < rep.values_p.size(); ++r) os << r << ",P," << rep.values_p[r] << '\n';
    for (std::size_t r = 0; r < rep.values_q.size(); ++r) os << r << ",Q," << rep.values_q[r] << '\n';
  }
  auto j = to_json(rep);
  j["provenance"] = provenance(cfg);
  Output out(c, "simulate.json");
  out.stream() << j.dump(2) << '\n';
  return 0;
}

struct SweepRow {
  Rational k, signal;
  double total_bound = 0, series = 0, hardness = 0;
  std::optional<double> error_rate;
};

int cmd_sweep(const Common& c) {
  auto cfg = need_config(c);
  if (!cfg.sweep) throw config_error("sweep", "missing sweep block");
  const std::string marker = "# fingerprint=" + cfg.fingerprint();
  if (!c.out_dir.empty()) {
    std::ifstream prev(fs::path(c.out_dir) / "sweep.csv");
    std::string first, line, last;
    if (prev && std::getline(prev, first) && first == marker) {
      while (std::getline(prev, line))
        if (!line.empty()) last = line;
      if (last == "# complete") {
        std::cerr << "sweep: " << (fs::path(c.out_dir) / "sweep.csv").string() << " is up to date\n";
        return 0;
      }
    }
  }

  const bool gaussian = cfg.mode == Mode::gaussian;
  const auto& grid = *cfg.sweep;
  const Rational base_k = gaussian ? cfg.gauss_p.k : cfg.bin_p.k;
  const Rational base_signal = gaussian ? cfg.gauss_p.lambda : cfg.bin_p.s;
  const auto ks = grid.k.empty() ? std::vector<Rational>{base_k} : grid.k;
  const auto signals = grid.signal.empty() ? std::vector<Rational>{base_signal} : grid.signal;
  std::vector<std::pair<Rational, Rational>> cells;
  for (const auto& k : ks)
    for (const auto& s : signals) cells.emplace_back(k, s);

  AdvOptions opt = adv_options(cfg, c);
  opt.threads = 1;
  std::vector<SweepRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  auto run_cell = [&](std::size_t i) {
    try {
      ExperimentConfig cell = cfg;
      SweepRow row;
      row.k = cells[i].first;
      row.signal = cells[i].second;
      const int D = cfg.D;
      if (gaussian) {
        for (auto* p : {&cell.gauss_p, &cell.gauss_q}) {
          p->k = row.k;
          p->lambda = row.signal;
          p->validate(p == &cell.gauss_p ? "P" : "Q");
        }
      } else {
        for (auto* p : {&cell.bin_p, &cell.bin_q}) {
          p->k = row.k;
          p->s = row.signal;
          p->validate(p == &cell.bin_p ? "P" : "Q");
        }
      }
      const auto rep = advantage(cell, opt);
      row.total_bound = rep.total_bound;
      row.series = rep.series_bound;
      const std::int64_t n = gaussian ? cell.gauss_p.n : cell.bin_p.n;
      const Rational lam_sq = gaussian ? Rational(row.signal * row.signal) : Rational(row.signal * row.signal / cell.bin_p.q);
      const Rational spread = std::max(Rational(row.k * row.k / Rational(n)), Rational(1));
      row.hardness = to_double(Rational(D * D * D * D * D) * rep.M_hat * rep.M_hat * lam_sq * spread);
      if (grid.simulate) {
        cell.seed = rng::derive_seed(cfg.seed, "sweep", i);
        row.error_rate = simulate(cell, 1).error_rate;
      }
      rows[i] = row;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  // Cells vary k and the signal in both models alike, so they all use the
  // same catalog; build it once so workers only read the cache file.
  if (opt.catalog_dir) (void)advantage(cfg, opt);
  const unsigned workers = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < cells.size(); i += workers) run_cell(i);
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Output out(c, "sweep.csv");
  auto& os = out.stream();
  os << marker << "\n";
  os << "mode,n,D,k," << (gaussian ? "lambda" : "s") << ",total_bound,series_bound,hardness,error_rate\n";
  os.precision(12);
  const std::int64_t n = gaussian ? cfg.gauss_p.n : cfg.bin_p.n;
  for (const auto& row : rows) {
    os << mode_name(cfg.mode) << ',' << n << ',' << cfg.D << ',' << row.k.get_str() << ',' << row.signal.get_str() << ','
       << row.total_bound << ',';
    if (std::isfinite(row.series)) os << row.series;
    else os << "inf";
    os << ',' << row.hardness << ',';
    if (row.error_rate) os << *row.error_rate;
    os << '\n';
  }
  os << "# complete\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-degree advantage bounds for planted-versus-planted community models"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config_path, "JSON experiment config");
    sub->add_option("--seed", c.seed, "Master seed (overrides the config)");
    sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out_dir, "Output directory (default: stdout)");
  };

  int d_max = -1;
  bool no_loops = false, cyclic = false, simple = false, with_oracle = false;
  long mc_reps = 20000;

  auto* en = app.add_subcommand("enumerate", "Write the multigraph class catalog");
  add_common(en);
  en->add_option("--d-max", d_max, "Maximum edge count");
  en->add_flag("--no-loops", no_loops, "Exclude self-loops");
  en->add_flag("--cyclic", cyclic, "Keep classes whose components all contain a cycle");
  en->add_flag("--simple", simple, "Exclude multi-edges");

  auto* mo = app.add_subcommand("moments", "Closed-form vs Monte Carlo moments for every class with d <= D");
  add_common(mo);
  mo->add_option("--mc-reps", mc_reps, "Monte Carlo replicates per class")->check(CLI::Range(2L, 1L << 40));

  auto* rv = app.add_subcommand("rvalues", "CSV of r-values and their bound for every class with d <= D");
  add_common(rv);
  auto* ad = app.add_subcommand("advantage", "JSON advantage report");
  add_common(ad);
  ad->add_flag("--oracle", with_oracle, "Include the exact tiny-instance advantage");
  auto* si = app.add_subcommand("simulate", "Monte Carlo test-statistic experiment");
  add_common(si);
  auto* orc = app.add_subcommand("oracle", "Exact advantage for n <= 6, D <= 3");
  add_common(orc);
  auto* sw = app.add_subcommand("sweep", "Advantage (and optional simulation) over a parameter grid");
  add_common(sw);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*en) return cmd_enumerate(c, d_max, no_loops, cyclic, simple);
    if (*mo) return cmd_moments(c, mc_reps);
    if (*rv) return cmd_rvalues(c);
    if (*ad) return cmd_advantage(c, with_oracle);
    if (*si) return cmd_simulate(c);
    if (*orc) return cmd_oracle(c);
    if (*sw) return cmd_sweep(c);
  } catch (const config_error& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return 2;
  } catch (const parameter_error& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const size_limit_error& e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
