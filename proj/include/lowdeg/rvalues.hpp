// r-values for a pair of priors (P, Q):
//
//   r_alpha = E_P[X^alpha] - sum_{0 <= beta < alpha} r_beta binom(alpha, beta) E_Q[X^(alpha - beta)],
//   r_empty = 1.
//
// RTable evaluates the recursion per canonical class (both models are
// exchangeable, so r depends on alpha only through its class). The naive
// evaluator works on labeled exponent vectors and exists to check that
// assumption.
#pragma once

#include "lowdeg/graphs.hpp"
#include "lowdeg/moments.hpp"

#include <map>
#include <stdexcept>
#include <unordered_map>

namespace lowdeg {

struct RTableOptions {
  bool factorize = true;        // r multiplies over connected components
  bool forest_shortcut = true;  // r = 0 on forests when tree moments agree
};

struct RTableStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
};

/// Memoized r-values for a fixed (P, Q). Not synchronized: give each worker
/// its own table.
class RTable {
 public:
  RTable(PriorSpec p, PriorSpec q, RTableOptions options = {})
      : p_moments_(std::move(p)), q_moments_(std::move(q)), options_(options) {
    if (p_moments_.spec().x.empty() || q_moments_.spec().x.empty())
      throw std::invalid_argument("RTable: priors need at least one community");
    memo_.emplace(MultigraphClass{}, Rational(1));
  }

  const PriorSpec& p_spec() const { return p_moments_.spec(); }
  const PriorSpec& q_spec() const { return q_moments_.spec(); }
  const RTableOptions& options() const { return options_; }
  const RTableStats& stats() const { return stats_; }
  std::size_t size() const { return memo_.size(); }

  /// Forest moments E[(aX + y)^tau] depend on (a * lambda, k/n, y) only, so
  /// matching those makes every forest moment agree under P and Q.
  bool tree_moments_match() const {
    const auto& p = p_spec();
    const auto& q = q_spec();
    return p.scale * p.lambda == q.scale * q.lambda && p.density == q.density && p.shift == q.shift;
  }

  const Rational& r(const MultigraphClass& g) {
    if (auto it = memo_.find(g); it != memo_.end()) {
      ++stats_.hits;
      return it->second;
    }
    ++stats_.misses;
    Rational value = compute(g);
    return memo_.emplace(g, std::move(value)).first->second;
  }

  const Rational& moment_p(const MultigraphClass& g) { return p_moments_(g); }
  const Rational& moment_q(const MultigraphClass& g) { return q_moments_(g); }

 private:
  Rational compute(const MultigraphClass& g) {
    if (g.d() > kSubgraphEdgeLimit)
      throw size_limit_error("r_value: |alpha| = " + std::to_string(g.d()) + " exceeds limit " +
                             std::to_string(kSubgraphEdgeLimit));
    if (options_.forest_shortcut && g.is_forest() && tree_moments_match()) return 0;
    if (options_.factorize && !g.is_connected()) {
      Rational out = 1;
      for (const auto& c : g.components()) {
        out *= r(c);
        if (out == 0) break;
      }
      return out;
    }
    const ExponentVector alpha = g.to_exponent_vector();
    Rational out = p_moments_(g);
    for_each_sub_multigraph(alpha, [&](const ExponentVector& beta, const Integer& mult) {
      if (beta == alpha) return;
      const Rational& rb = r(canonicalize(beta));
      if (rb == 0) return;
      out -= rb * Rational(mult) * q_moments_(canonicalize(difference(alpha, beta)));
    });
    return out;
  }

  MomentCache p_moments_;
  MomentCache q_moments_;
  RTableOptions options_;
  RTableStats stats_;
  std::unordered_map<MultigraphClass, Rational, MultigraphClassHash> memo_;
};

inline Rational r_value(const MultigraphClass& g, RTable& table) { return table.r(g); }

inline constexpr int kNaiveEdgeLimit = 6;

/// Direct recursion on labeled exponent vectors: moments from labeled
/// components, memo keyed by the labeled vector, no fast paths.
class NaiveRValues {
 public:
  NaiveRValues(PriorSpec p, PriorSpec q) : p_(std::move(p)), q_(std::move(q)) {}

  const Rational& r(const ExponentVector& alpha) {
    if (alpha.total_degree() > kNaiveEdgeLimit)
      throw size_limit_error("r_value_naive: |alpha| = " + std::to_string(alpha.total_degree()) + " exceeds limit " +
                             std::to_string(kNaiveEdgeLimit));
    if (auto it = memo_.find(alpha); it != memo_.end()) return it->second;
    Rational out;
    if (alpha.empty()) {
      out = 1;
    } else {
      out = moment(alpha, p_, p_memo_);
      for_each_sub_multigraph(alpha, [&](const ExponentVector& beta, const Integer& mult) {
        if (beta == alpha) return;
        out -= r(beta) * Rational(mult) * moment(difference(alpha, beta), q_, q_memo_);
      });
    }
    return memo_.emplace(alpha, std::move(out)).first->second;
  }

 private:
  static const Rational& moment(const ExponentVector& a, const PriorSpec& spec, std::map<ExponentVector, Rational>& memo) {
    if (auto it = memo.find(a); it != memo.end()) return it->second;
    return memo.emplace(a, labeled_affine_moment(a, spec)).first->second;
  }

  PriorSpec p_, q_;
  std::map<ExponentVector, Rational> memo_, p_memo_, q_memo_;
};

inline Rational r_value_naive(const ExponentVector& alpha, const PriorSpec& p, const PriorSpec& q) {
  NaiveRValues naive(p, q);
  return naive.r(alpha);
}

/// r-value under X -> a X + y, i.e. a^|g| r_g. Cross-checked against a fresh
/// recursion on the transformed priors; a mismatch throws std::logic_error.
inline Rational r_transform(const MultigraphClass& g, RTable& table, const Rational& a, const Rational& y) {
  const Rational value = pow_rat(a, g.d()) * table.r(g);
  RTable fresh(table.p_spec().transformed(a, y), table.q_spec().transformed(a, y), table.options());
  if (fresh.r(g) != value)
    throw std::logic_error("r_transform: recursion on transformed priors gives " + fresh.r(g).get_str() +
                           ", expected " + value.get_str() + " for class " + g.edge_string());
  return value;
}

struct RBoundCheck {
  Rational value;
  Rational bound;
  bool ok = false;
};

/// |r_g| <= (d+1)^d (M_hat lambda / C)^d (k/n)^v, with M_hat = max(M, M').
inline RBoundCheck r_bound_check(const MultigraphClass& g, RTable& table, const Rational& C) {
  const auto& p = table.p_spec();
  const auto& q = table.q_spec();
  const Rational lam_p = abs_rat(p.scale) * p.lambda, lam_q = abs_rat(q.scale) * q.lambda;
  if (lam_p != lam_q || p.density != q.density)
    throw std::invalid_argument("r_bound_check: P and Q must share lambda and k/n");
  if (C <= 0) throw std::invalid_argument("r_bound_check: C must be positive");
  for (const PriorSpec* s : {&p, &q}) {
    const Rational m_xmin = Rational(s->M()) * *std::min_element(s->x.begin(), s->x.end());
    if (m_xmin < C)
      throw std::invalid_argument("r_bound_check: M * min(x) >= C violated (" + m_xmin.get_str() + " < " + C.get_str() +
                                  ")");
  }
  const Rational m_hat = std::max(p.M(), q.M());
  RBoundCheck out;
  out.value = table.r(g);
  out.bound = pow_rat(Rational(g.d() + 1), g.d()) * pow_rat(m_hat * lam_p / C, g.d()) * pow_rat(p.density, g.v());
  out.ok = abs_rat(out.value) <= out.bound;
  return out;
}

}  // namespace lowdeg
