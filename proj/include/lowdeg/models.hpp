// Planted-community models: parameter bundles, label sampling, mean
// matrices, and full observation samplers for the additive Gaussian and the
// binary observation models.
#pragma once

#include "lowdeg/exact.hpp"
#include "lowdeg/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace lowdeg {

namespace detail {

inline void validate_proportions(const std::vector<Rational>& x, const Rational& C, const std::string& who) {
  if (x.empty()) throw parameter_error(who + ": x must list at least one community proportion");
  Rational sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0) throw parameter_error(who + ": x[" + std::to_string(i) + "] = " + x[i].get_str() + " must be > 0");
    sum += x[i];
  }
  if (sum != 1) throw parameter_error(who + ": sum(x) = " + sum.get_str() + " must equal 1");
  if (C <= 0 || C > 1) throw parameter_error(who + ": C = " + C.get_str() + " must lie in (0, 1]");
  const Rational m_xmin = Rational(static_cast<long>(x.size())) * *std::min_element(x.begin(), x.end());
  if (m_xmin < C)
    throw parameter_error(who + ": M * min(x) >= C violated: " + m_xmin.get_str() + " < " + C.get_str());
}

inline void validate_size(std::int64_t n, const Rational& k, const std::string& who) {
  if (n < 1) throw parameter_error(who + ": n must be >= 1");
  if (k < 0 || k > Rational(n)) throw parameter_error(who + ": 0 <= k <= n violated (k = " + k.get_str() + ")");
}

}  // namespace detail

struct GaussianParams {
  std::int64_t n = 0;
  Rational k;
  Rational lambda;
  std::vector<Rational> x;
  Rational C = 1;  // caller's constant with M * min(x) >= C

  int M() const { return static_cast<int>(x.size()); }
  Rational density() const { return k / Rational(n); }
  Rational x_min() const { return *std::min_element(x.begin(), x.end()); }

  void validate(const std::string& who = "gaussian") const {
    detail::validate_size(n, k, who);
    if (lambda < 0) throw parameter_error(who + ": lambda must be >= 0");
    detail::validate_proportions(x, C, who);
  }
};

/// Binary model; the mean matrix is q off-community and q + s / x_l inside
/// community l. tau1 caps every success probability.
struct BinaryParams {
  std::int64_t n = 0;
  Rational k;
  Rational q;
  Rational s;
  Rational tau1;
  std::vector<Rational> x;
  Rational C = 1;

  int M() const { return static_cast<int>(x.size()); }
  Rational density() const { return k / Rational(n); }
  Rational x_min() const { return *std::min_element(x.begin(), x.end()); }

  void validate(const std::string& who = "binary") const {
    detail::validate_size(n, k, who);
    detail::validate_proportions(x, C, who);
    if (q <= 0) throw parameter_error(who + ": q > 0 violated (q = " + q.get_str() + ")");
    if (s < 0) throw parameter_error(who + ": s >= 0 violated (s = " + s.get_str() + ")");
    if (tau1 >= 1) throw parameter_error(who + ": tau1 < 1 violated (tau1 = " + tau1.get_str() + ")");
    const Rational top = q + s / x_min();
    if (top > tau1)
      throw parameter_error(who + ": q + s/min(x) <= tau1 violated: q + s/min(x) = " + top.get_str() + " > tau1 = " +
                            tau1.get_str() + " (q = " + q.get_str() + ", s = " + s.get_str() + ", min(x) = " +
                            x_min().get_str() + ")");
  }
};

/// Community labels; kStar marks vertices outside every community.
struct LabelAssignment {
  static constexpr int kStar = -1;
  std::vector<int> labels;

  int size() const { return static_cast<int>(labels.size()); }
  int operator[](int i) const { return labels[static_cast<std::size_t>(i)]; }
};

/// Mean-matrix description X~ = scale * X + shift, where X is lambda / x_l on
/// pairs inside community l and 0 elsewhere. Community membership has
/// probability density * x_l per vertex.
struct PriorSpec {
  Rational lambda;
  Rational density;
  std::vector<Rational> x;
  Rational scale = 1;
  Rational shift = 0;

  static PriorSpec gaussian(const GaussianParams& p) { return {p.lambda, p.density(), p.x, 1, 0}; }
  /// X^{(q,s)} = X(lambda = s) + q.
  static PriorSpec binary(const BinaryParams& p) { return {p.s, p.density(), p.x, 1, p.q}; }

  int M() const { return static_cast<int>(x.size()); }

  /// a * X~ + y.
  PriorSpec transformed(const Rational& a, const Rational& y) const {
    if (a == 0) throw std::invalid_argument("PriorSpec: scale must be nonzero");
    PriorSpec out = *this;
    out.scale = a * scale;
    out.shift = a * shift + y;
    return out;
  }
  PriorSpec shift_free() const {
    PriorSpec out = *this;
    out.shift = 0;
    return out;
  }

  bool operator==(const PriorSpec&) const = default;
};

/// Exact entry of the mean matrix for labels (li, lj).
inline Rational mean_entry(const PriorSpec& spec, int li, int lj) {
  Rational base = 0;
  if (li != LabelAssignment::kStar && li == lj) base = spec.lambda / spec.x[static_cast<std::size_t>(li)];
  return spec.scale * base + spec.shift;
}

inline Eigen::MatrixXd mean_matrix(const PriorSpec& spec, const LabelAssignment& sigma) {
  const int n = sigma.size();
  std::vector<double> per_label(spec.x.size());
  for (std::size_t l = 0; l < spec.x.size(); ++l) per_label[l] = to_double(mean_entry(spec, static_cast<int>(l), static_cast<int>(l)));
  const double off = to_double(mean_entry(spec, LabelAssignment::kStar, LabelAssignment::kStar));
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = (sigma[i] != LabelAssignment::kStar && sigma[i] == sigma[j]) ? per_label[static_cast<std::size_t>(sigma[i])] : off;
  return out;
}

template <class Params>
LabelAssignment sample_labels(const Params& p, std::uint64_t seed) {
  // Cumulative thresholds density * (x_1 + ... + x_l).
  std::vector<double> cut;
  Rational acc = 0;
  for (const auto& xl : p.x) {
    acc += p.density() * xl;
    cut.push_back(to_double(acc));
  }
  LabelAssignment sigma;
  sigma.labels.assign(static_cast<std::size_t>(p.n), LabelAssignment::kStar);
  for (std::int64_t i = 0; i < p.n; ++i) {
    const double u = rng::uniform(seed, rng::Stream::labels, static_cast<std::uint64_t>(i));
    for (std::size_t l = 0; l < cut.size(); ++l)
      if (u < cut[l]) {
        sigma.labels[static_cast<std::size_t>(i)] = static_cast<int>(l);
        break;
      }
  }
  return sigma;
}

struct Sample {
  Eigen::MatrixXd y;
  LabelAssignment sigma;
  bool binary = false;
};

namespace detail {

// Rows are striped across workers; each entry depends only on (seed, i, j).
template <class Fill>
void fill_upper(int n, unsigned threads, Fill&& fill) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1))));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fill(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = static_cast<int>(t); i < n; i += static_cast<int>(threads)) fill(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Y = X + Z with Z standard normal on i <= j, symmetrized; diagonal observed.
inline Sample sample_gaussian(const GaussianParams& p, std::uint64_t seed, unsigned threads = 1) {
  Sample out;
  out.sigma = sample_labels(p, seed);
  const Eigen::MatrixXd mean = mean_matrix(PriorSpec::gaussian(p), out.sigma);
  const int n = static_cast<int>(p.n);
  out.y.resize(n, n);
  detail::fill_upper(n, threads, [&](int i) {
    for (int j = i; j < n; ++j) {
      const double v = mean(i, j) + rng::normal(seed, rng::Stream::noise, static_cast<std::uint64_t>(i),
                                                static_cast<std::uint64_t>(j));
      out.y(i, j) = v;
      out.y(j, i) = v;
    }
  });
  return out;
}

/// Conditionally independent Bernoulli entries for i < j; zero diagonal.
inline Sample sample_binary(const BinaryParams& p, std::uint64_t seed, unsigned threads = 1) {
  Sample out;
  out.binary = true;
  out.sigma = sample_labels(p, seed);
  const Eigen::MatrixXd prob = mean_matrix(PriorSpec::binary(p), out.sigma);
  const int n = static_cast<int>(p.n);
  out.y = Eigen::MatrixXd::Zero(n, n);
  detail::fill_upper(n, threads, [&](int i) {
    for (int j = i + 1; j < n; ++j) {
      const double u = rng::uniform(seed, rng::Stream::bernoulli, static_cast<std::uint64_t>(i),
                                    static_cast<std::uint64_t>(j));
      const double v = u < prob(i, j) ? 1.0 : 0.0;
      out.y(i, j) = v;
      out.y(j, i) = v;
    }
  });
  return out;
}

/// Upper-triangle CSV: `# key=value` header lines, then `i,j,value`.
inline void write_sample_csv(std::ostream& os, const Sample& s, const std::map<std::string, std::string>& header) {
  for (const auto& [key, value] : header) os << "# " << key << '=' << value << '\n';
  os << "i,j,value\n";
  const int n = static_cast<int>(s.y.rows());
  os.precision(17);
  for (int i = 0; i < n; ++i)
    for (int j = s.binary ? i + 1 : i; j < n; ++j) os << i << ',' << j << ',' << s.y(i, j) << '\n';
}

}  // namespace lowdeg
