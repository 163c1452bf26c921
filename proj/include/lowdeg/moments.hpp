// Mixed moments E[X~^alpha] of the community mean matrix.
#pragma once

#include "lowdeg/graphs.hpp"
#include "lowdeg/models.hpp"
#include "lowdeg/rng.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace lowdeg {

enum class Provenance { closed_form, affine_expansion, monte_carlo };

struct MomentValue {
  Rational exact;
  Provenance provenance = Provenance::closed_form;
};

namespace detail {

// sum_l x_l^(v - d) for one connected component.
inline Rational component_weight(const std::vector<Rational>& x, int v, int d) {
  Rational out = 0;
  for (const auto& xl : x) out += pow_rat(xl, v - d);
  return out;
}

}  // namespace detail

/// E[X^g] for the untransformed mean matrix (scale and shift of `spec` are
/// ignored): lambda^d (k/n)^v prod over components of sum_l x_l^(v_c - d_c).
/// Components involve disjoint vertex sets, whose labels are independent.
inline MomentValue base_moment(const MultigraphClass& g, const PriorSpec& spec) {
  Rational out = pow_rat(spec.lambda, g.d()) * pow_rat(spec.density, g.v());
  for (const auto& c : g.component_info()) out *= detail::component_weight(spec.x, c.size, c.d);
  return {out, Provenance::closed_form};
}

inline MomentValue base_moment(const MultigraphClass& g, const GaussianParams& p) {
  return base_moment(g, PriorSpec::gaussian(p));
}

/// The same closed form evaluated on a labeled exponent vector, finding
/// components directly instead of through canonical classes.
inline Rational labeled_base_moment(const ExponentVector& alpha, const PriorSpec& spec) {
  const int n = alpha.n_vertices();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  std::vector<char> touched(static_cast<std::size_t>(n), 0);
  for (const auto& e : alpha.edges()) {
    touched[e.u] = touched[e.w] = 1;
    parent[find(e.u)] = find(e.w);
  }
  std::map<int, std::pair<int, int>> comp;  // root -> (vertices, edges)
  for (int i = 0; i < n; ++i)
    if (touched[i]) ++comp[find(i)].first;
  for (const auto& e : alpha.edges()) comp[find(e.u)].second += e.mult;
  int v = 0;
  for (const auto& [root, vd] : comp) v += vd.first;
  Rational out = pow_rat(spec.lambda, alpha.total_degree()) * pow_rat(spec.density, v);
  for (const auto& [root, vd] : comp) out *= detail::component_weight(spec.x, vd.first, vd.second);
  return out;
}

/// E[(aX + y)^alpha] = sum_{beta <= alpha} binom(alpha, beta) a^|beta| y^(|alpha|-|beta|) E[X^beta].
inline MomentValue affine_moment(const MultigraphClass& g, const PriorSpec& spec) {
  if (spec.shift == 0) return {pow_rat(spec.scale, g.d()) * base_moment(g, spec).exact, Provenance::affine_expansion};
  Rational out = 0;
  const int d = g.d();
  for_each_sub_multigraph(g.to_exponent_vector(), [&](const ExponentVector& beta, const Integer& mult) {
    const int b = beta.total_degree();
    out += Rational(mult) * pow_rat(spec.scale, b) * pow_rat(spec.shift, d - b) *
           base_moment(canonicalize(beta), spec).exact;
  });
  return {out, Provenance::affine_expansion};
}

/// Labeled counterpart of affine_moment (no canonicalization anywhere).
inline Rational labeled_affine_moment(const ExponentVector& alpha, const PriorSpec& spec) {
  const int d = alpha.total_degree();
  if (spec.shift == 0) return pow_rat(spec.scale, d) * labeled_base_moment(alpha, spec);
  Rational out = 0;
  for_each_sub_multigraph(alpha, [&](const ExponentVector& beta, const Integer& mult) {
    const int b = beta.total_degree();
    out += Rational(mult) * pow_rat(spec.scale, b) * pow_rat(spec.shift, d - b) * labeled_base_moment(beta, spec);
  });
  return out;
}

/// Memoized affine moments for one fixed spec.
class MomentCache {
 public:
  explicit MomentCache(PriorSpec spec) : spec_(std::move(spec)) {}

  const Rational& operator()(const MultigraphClass& g) {
    if (auto it = memo_.find(g); it != memo_.end()) return it->second;
    return memo_.emplace(g, affine_moment(g, spec_).exact).first->second;
  }
  const PriorSpec& spec() const { return spec_; }
  std::size_t size() const { return memo_.size(); }

 private:
  PriorSpec spec_;
  std::unordered_map<MultigraphClass, Rational, MultigraphClassHash> memo_;
};

struct McEstimate {
  double estimate = 0;
  double standard_error = 0;
};

/// Monte Carlo estimate of E[X~^g]: draw labels for the v vertices of the
/// canonical embedding and multiply the corresponding mean entries.
inline McEstimate mc_moment(const MultigraphClass& g, const PriorSpec& spec, long reps, std::uint64_t seed) {
  if (reps < 2) throw std::invalid_argument("mc_moment: reps must be >= 2");
  std::vector<double> cut;
  Rational acc = 0;
  for (const auto& xl : spec.x) {
    acc += spec.density * xl;
    cut.push_back(to_double(acc));
  }
  std::vector<double> inside(spec.x.size());
  for (std::size_t l = 0; l < spec.x.size(); ++l)
    inside[l] = to_double(mean_entry(spec, static_cast<int>(l), static_cast<int>(l)));
  const double outside = to_double(mean_entry(spec, LabelAssignment::kStar, LabelAssignment::kStar));

  std::vector<int> lab(static_cast<std::size_t>(g.v()));
  double sum = 0, sum_sq = 0;
  for (long r = 0; r < reps; ++r) {
    for (int i = 0; i < g.v(); ++i) {
      const double u = rng::uniform(seed, rng::Stream::monte_carlo, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(i));
      lab[i] = LabelAssignment::kStar;
      for (std::size_t l = 0; l < cut.size(); ++l)
        if (u < cut[l]) {
          lab[i] = static_cast<int>(l);
          break;
        }
    }
    double prod = 1;
    for (const auto& e : g.edges()) {
      const double entry = (lab[e.u] != LabelAssignment::kStar && lab[e.u] == lab[e.w]) ? inside[lab[e.u]] : outside;
      prod *= std::pow(entry, e.mult);
    }
    sum += prod;
    sum_sq += prod * prod;
  }
  const double mean = sum / static_cast<double>(reps);
  const double var = std::max(0.0, (sum_sq - static_cast<double>(reps) * mean * mean) / static_cast<double>(reps - 1));
  return {mean, std::sqrt(var / static_cast<double>(reps))};
}

}  // namespace lowdeg
