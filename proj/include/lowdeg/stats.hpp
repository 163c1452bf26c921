// Test statistics for the easy regimes: the diagonal sum (degree 1, Gaussian)
// and the signed triangle count (degree 3, binary), their analytic moments,
// and Monte Carlo separation experiments.
#pragma once

#include "lowdeg/models.hpp"
#include "lowdeg/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lowdeg {

enum class Statistic { diag_sum, signed_triangles };

inline const char* statistic_name(Statistic s) { return s == Statistic::diag_sum ? "diag_sum" : "signed_triangles"; }

inline double diag_sum(const Sample& s) {
  if (s.binary) throw std::invalid_argument("diag_sum: binary samples have a zero diagonal");
  return s.y.trace();
}

/// Sum of Y_ii for the sample sample_gaussian(p, seed) would draw, without
/// generating the off-diagonal entries (each entry is a function of its
/// coordinates only).
inline double diag_sum_direct(const GaussianParams& p, std::uint64_t seed) {
  const LabelAssignment sigma = sample_labels(p, seed);
  std::vector<double> inside;
  for (const auto& xl : p.x) inside.push_back(to_double(p.lambda / xl));
  double out = 0;
  for (std::int64_t i = 0; i < p.n; ++i) {
    const int l = sigma[static_cast<int>(i)];
    out += (l == LabelAssignment::kStar ? 0.0 : inside[static_cast<std::size_t>(l)]) +
           rng::normal(seed, rng::Stream::noise, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(i));
  }
  return out;
}

/// R_ij = Y_ij - q off the diagonal, R_ii = 0.
template <class Scalar = double>
std::vector<std::vector<Scalar>> centered_matrix(const Sample& s, const Scalar& q) {
  const auto n = static_cast<std::size_t>(s.y.rows());
  std::vector<std::vector<Scalar>> r(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) r[i][j] = Scalar(s.y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) - q;
  return r;
}

/// trace(R^3) / 6; equals the triangle sum because R has a zero diagonal.
template <class Scalar>
Scalar signed_triangles_trace(const std::vector<std::vector<Scalar>>& r) {
  const std::size_t n = r.size();
  Scalar tr = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (r[i][j] == 0) continue;
      Scalar inner = 0;
      for (std::size_t k = 0; k < n; ++k) inner += r[j][k] * r[k][i];
      tr += r[i][j] * inner;
    }
  return tr / 6;
}

template <class Scalar>
Scalar signed_triangles_naive(const std::vector<std::vector<Scalar>>& r) {
  const std::size_t n = r.size();
  Scalar out = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) out += r[i][j] * r[i][k] * r[j][k];
  return out;
}

/// Fast path for experiments: dense trace(R^3) / 6 through Eigen.
inline double signed_triangles(const Sample& s, double q) {
  if (!s.binary) throw std::invalid_argument("signed_triangles: expects a binary sample");
  Eigen::MatrixXd r = s.y.array() - q;
  r.diagonal().setZero();
  const Eigen::MatrixXd r2 = r * r;
  return r2.cwiseProduct(r).sum() / 6.0;
}

struct EdgeKernel {
  Rational mean;    // E[R_ij | both in community c]
  Rational second;  // E[R_ij^2 | both in community c]
};

inline EdgeKernel edge_kernel(const BinaryParams& p, int c) {
  const Rational lift = p.s / p.x.at(static_cast<std::size_t>(c));
  return {lift, p.q * (1 - p.q) + lift * (1 - 2 * p.q)};
}

struct AnalyticMoments {
  Rational mean;
  Rational var_bound;
};

/// Mean M k lambda; Var <= n E[Y_11^2] = n + sum_l k lambda^2 / x_l.
inline AnalyticMoments diag_moments(const GaussianParams& p) {
  AnalyticMoments out;
  out.mean = Rational(p.M()) * p.k * p.lambda;
  out.var_bound = Rational(p.n);
  for (const auto& xl : p.x) out.var_bound += p.k * p.lambda * p.lambda / xl;
  return out;
}

/// Mean C(n,3) M k^3 s^3 / n^3 and the triangle-count variance bound.
inline AnalyticMoments tri_moments(const BinaryParams& p) {
  const Rational n(p.n), k = p.k, s = p.s, q = p.q, M(p.M()), C = p.C;
  AnalyticMoments out;
  out.mean = Rational(binomial(static_cast<unsigned long>(p.n), 3)) * M * pow_rat(k, 3) * pow_rat(s, 3) / pow_rat(n, 3);
  out.var_bound = M * M * pow_rat(k, 5) * pow_rat(s, 6) / C + M * pow_rat(k, 4) * pow_rat(s, 4) * q +
                  M * M * pow_rat(k, 4) * pow_rat(s, 5) / C + pow_rat(n, 3) * pow_rat(q, 3) / 3 + n * k * k * s * q * q +
                  pow_rat(k, 3) * q * q * s + pow_rat(k, 3) * q * s * s + M * pow_rat(k, 3) * pow_rat(s, 3) / 3;
  return out;
}

struct EmpiricalMoments {
  double mean = 0;
  double var = 0;  // unbiased
};

inline EmpiricalMoments empirical(const std::vector<double>& v) {
  EmpiricalMoments out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    for (double x : v) out.var += (x - out.mean) * (x - out.mean);
    out.var /= static_cast<double>(v.size() - 1);
  }
  return out;
}

struct TestStatReport {
  Statistic statistic = Statistic::diag_sum;
  AnalyticMoments analytic_p, analytic_q;
  EmpiricalMoments empirical_p, empirical_q;
  int reps = 0;
  double threshold = 0;
  double separation_ratio = 0;  // |mean gap| / sqrt(max variance), empirical
  double error_rate = 0;        // midpoint-threshold misclassification
  std::vector<double> values_p, values_q;
};

namespace detail {

template <class Fn>
std::vector<double> replicate(int reps, unsigned threads, Fn&& fn) {
  std::vector<double> out(static_cast<std::size_t>(reps));
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      for (int r = static_cast<int>(t); r < reps; r += static_cast<int>(threads)) out[static_cast<std::size_t>(r)] = fn(r);
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
  return out;
}

inline void summarize(TestStatReport& rep) {
  rep.empirical_p = empirical(rep.values_p);
  rep.empirical_q = empirical(rep.values_q);
  const double mp = to_double(rep.analytic_p.mean), mq = to_double(rep.analytic_q.mean);
  rep.threshold = (mp + mq) / 2;
  const bool p_high = mp >= mq;
  long wrong = 0;
  for (double v : rep.values_p) wrong += p_high ? (v <= rep.threshold) : (v >= rep.threshold);
  for (double v : rep.values_q) wrong += p_high ? (v > rep.threshold) : (v < rep.threshold);
  rep.error_rate = static_cast<double>(wrong) / static_cast<double>(rep.values_p.size() + rep.values_q.size());
  const double sd = std::sqrt(std::max(rep.empirical_p.var, rep.empirical_q.var));
  const double gap = std::abs(rep.empirical_p.mean - rep.empirical_q.mean);
  rep.separation_ratio = sd > 0 ? gap / sd : (gap > 0 ? INFINITY : 0.0);
}

inline void check_reps(int reps) {
  if (reps < 50) throw std::invalid_argument("run_experiment: reps must be >= 50");
}

}  // namespace detail

/// Diagonal-sum experiment; replicate r of P uses derive_seed(seed, "P", r).
inline TestStatReport run_experiment(const GaussianParams& P, const GaussianParams& Q, int reps, std::uint64_t seed,
                                     unsigned threads = 1) {
  P.validate("P");
  Q.validate("Q");
  detail::check_reps(reps);
  TestStatReport rep;
  rep.statistic = Statistic::diag_sum;
  rep.reps = reps;
  rep.analytic_p = diag_moments(P);
  rep.analytic_q = diag_moments(Q);
  rep.values_p = detail::replicate(reps, threads, [&](int r) { return diag_sum_direct(P, rng::derive_seed(seed, "P", r)); });
  rep.values_q = detail::replicate(reps, threads, [&](int r) { return diag_sum_direct(Q, rng::derive_seed(seed, "Q", r)); });
  detail::summarize(rep);
  return rep;
}

/// Signed-triangle experiment, centering at the common q.
inline TestStatReport run_experiment(const BinaryParams& P, const BinaryParams& Q, int reps, std::uint64_t seed,
                                     unsigned threads = 1) {
  P.validate("P");
  Q.validate("Q");
  detail::check_reps(reps);
  if (P.q != Q.q) throw parameter_error("run_experiment: signed triangles need a common q");
  TestStatReport rep;
  rep.statistic = Statistic::signed_triangles;
  rep.reps = reps;
  rep.analytic_p = tri_moments(P);
  rep.analytic_q = tri_moments(Q);
  const double q = to_double(P.q);
  rep.values_p = detail::replicate(reps, threads, [&](int r) {
    return signed_triangles(sample_binary(P, rng::derive_seed(seed, "P", r)), q);
  });
  rep.values_q = detail::replicate(reps, threads, [&](int r) {
    return signed_triangles(sample_binary(Q, rng::derive_seed(seed, "Q", r)), q);
  });
  detail::summarize(rep);
  return rep;
}

}  // namespace lowdeg
