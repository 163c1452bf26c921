// Upper bounds on the degree-D advantage between two planted models.
//
// Gaussian:  Adv^2 <= 1 + sum over classes g with 1 <= |g| <= D of
//            (labeled copies of g in [n]) * r_g^2 / g!
// Binary:    the same over simple loop-free classes, with g! replaced by
//            (tau0 (1 - tau1))^|g|.
#pragma once

#include "lowdeg/catalog_io.hpp"
#include "lowdeg/models.hpp"
#include "lowdeg/rvalues.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <thread>

namespace lowdeg {

enum class Mode { gaussian, binary };

inline const char* mode_name(Mode m) { return m == Mode::gaussian ? "gaussian" : "binary"; }

struct AdvOptions {
  unsigned threads = 1;
  std::optional<std::string> catalog_dir;  // cache directory for class catalogs
};

struct AdvantageReport {
  Mode mode = Mode::gaussian;
  int D = 0;
  std::int64_t n = 0;
  Rational total_sq = 1;  // 1 + sum of contributions
  double total_bound = 1;
  std::map<std::pair<int, int>, Rational> contributions;  // (d, v) -> partial sum
  int M_hat = 0;
  int M_tilde = 0;
  Rational C;
  double series_bound = 1;  // +inf when the geometric ratio is >= 1
  std::optional<double> oracle;
  bool forests_dropped = false;
  std::size_t classes_evaluated = 0;
  Rational tau0, tau1;  // binary only
};

/// 1 + D * sum_{d=1}^{D} t^d with t = (2 D^2 M_hat / C)^2 lambda^2 max(k^2/n, 1).
/// Takes lambda^2 so the binary value s^2 / (q (1 - tau1)) stays rational.
inline double series_bound(int D, int M_hat, const Rational& lambda_sq, const Rational& C, const Rational& k,
                           std::int64_t n) {
  if (C <= 0) throw std::invalid_argument("series_bound: C must be positive");
  const Rational ratio = std::max(Rational(k * k / Rational(n)), Rational(1));
  const Rational t = pow_rat(Rational(2 * D * D * M_hat) / C, 2) * lambda_sq * ratio;
  if (t >= 1) return std::numeric_limits<double>::infinity();
  Rational sum = 0, term = 1;
  for (int d = 1; d <= D; ++d) {
    term *= t;
    sum += term;
  }
  return to_double(1 + D * sum);
}

namespace detail {

inline ClassCatalog load_catalog(const CatalogOptions& c, const AdvOptions& opt) {
  std::optional<std::string> path;
  if (opt.catalog_dir) path = catalog_cache_file(*opt.catalog_dir, c);
  return cached_catalog(c, path, opt.threads);
}

// Sums weight(g) * r_g^2 over the catalog, one RTable per worker.
template <class Weight>
void accumulate_contributions(const ClassCatalog& cat, const PriorSpec& p, const PriorSpec& q, unsigned threads,
                              Weight&& weight, AdvantageReport& rep) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cat.classes.size(), 1))));
  std::vector<std::map<std::pair<int, int>, Rational>> partial(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      RTable table(p, q);
      for (std::size_t i = t; i < cat.classes.size(); i += threads) {
        const auto& g = cat.classes[i];
        const Rational& r = table.r(g);
        if (r == 0) continue;
        partial[t][{g.d(), g.v()}] += weight(g) * r * r;
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& part : partial)
    for (auto& [key, value] : part) rep.contributions[key] += value;
  for (auto& [key, value] : rep.contributions) rep.total_sq += value;
  rep.total_bound = std::sqrt(to_double(rep.total_sq));
  rep.classes_evaluated = cat.classes.size();
}

inline void check_pair(std::int64_t np, std::int64_t nq, int D, const char* who) {
  if (np != nq) throw parameter_error(std::string(who) + ": P and Q must share n");
  if (D < 0) throw parameter_error(std::string(who) + ": D must be >= 0");
  if (D > kCatalogEdgeLimit)
    throw size_limit_error(std::string(who) + ": D = " + std::to_string(D) + " exceeds catalog limit " +
                           std::to_string(kCatalogEdgeLimit));
}

}  // namespace detail

/// Forest classes are skipped only when P and Q share lambda and k/n (then
/// every class with a tree component has r = 0); otherwise all classes count.
inline AdvantageReport adv_bound_gaussian(const GaussianParams& p, const GaussianParams& q, int D,
                                          const AdvOptions& opt = {}) {
  p.validate("P");
  q.validate("Q");
  detail::check_pair(p.n, q.n, D, "adv_bound_gaussian");
  AdvantageReport rep;
  rep.mode = Mode::gaussian;
  rep.D = D;
  rep.n = p.n;
  rep.M_hat = std::max(p.M(), q.M());
  rep.M_tilde = std::abs(p.M() - q.M());
  rep.C = std::min(p.C, q.C);
  const PriorSpec ps = PriorSpec::gaussian(p), qs = PriorSpec::gaussian(q);
  rep.forests_dropped = RTable(ps, qs).tree_moments_match();
  const ClassCatalog cat = detail::load_catalog(CatalogOptions{D, true, rep.forests_dropped, true}, opt);
  detail::accumulate_contributions(cat, ps, qs, opt.threads,
                                   [&](const MultigraphClass& g) -> Rational {
                                     return Rational(labeled_copy_count(g, p.n)) / Rational(alpha_factorial(g));
                                   },
                                   rep);
  const Rational lam = std::max(p.lambda, q.lambda);
  rep.series_bound = series_bound(D, rep.M_hat, lam * lam, rep.C, std::max(p.k, q.k), p.n);
  return rep;
}

/// r is shift invariant, so with a common q the r-values come from the
/// shift-free specs (lambda_eff = s). tau0 = min q, tau1 = max tau1.
inline AdvantageReport adv_bound_binary(const BinaryParams& p, const BinaryParams& q, int D,
                                        const AdvOptions& opt = {}) {
  p.validate("P");
  q.validate("Q");
  detail::check_pair(p.n, q.n, D, "adv_bound_binary");
  AdvantageReport rep;
  rep.mode = Mode::binary;
  rep.D = D;
  rep.n = p.n;
  rep.M_hat = std::max(p.M(), q.M());
  rep.M_tilde = std::abs(p.M() - q.M());
  rep.C = std::min(p.C, q.C);
  rep.tau0 = std::min(p.q, q.q);
  rep.tau1 = std::max(p.tau1, q.tau1);
  PriorSpec ps = PriorSpec::binary(p), qs = PriorSpec::binary(q);
  if (ps.shift == qs.shift) {
    ps = ps.shift_free();
    qs = qs.shift_free();
  }
  rep.forests_dropped = RTable(ps, qs).tree_moments_match();
  const ClassCatalog cat =
      detail::load_catalog(CatalogOptions{D, false, rep.forests_dropped, false}, opt);
  const Rational denom = rep.tau0 * (1 - rep.tau1);
  detail::accumulate_contributions(cat, ps, qs, opt.threads,
                                   [&](const MultigraphClass& g) -> Rational {
                                     return Rational(labeled_copy_count(g, p.n)) / pow_rat(denom, g.d());
                                   },
                                   rep);
  const Rational s = std::max(p.s, q.s);
  rep.series_bound = series_bound(D, rep.M_hat, s * s / denom, rep.C, std::max(p.k, q.k), p.n);
  return rep;
}

}  // namespace lowdeg
