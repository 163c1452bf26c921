#include "lowdeg/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lowdeg;

namespace {

const Rational half(1, 2);

GaussianParams gauss(std::int64_t n, Rational k, Rational lambda, std::vector<Rational> x) {
  GaussianParams p;
  p.n = n;
  p.k = std::move(k);
  p.lambda = std::move(lambda);
  p.x = std::move(x);
  return p;
}

BinaryParams binary(std::int64_t n, Rational k, Rational q, Rational s, Rational tau1, std::vector<Rational> x) {
  BinaryParams p;
  p.n = n;
  p.k = std::move(k);
  p.q = std::move(q);
  p.s = std::move(s);
  p.tau1 = std::move(tau1);
  p.x = std::move(x);
  return p;
}

Sample binary_sample(const Eigen::MatrixXd& y) {
  Sample s;
  s.y = y;
  s.binary = true;
  return s;
}

}  // namespace

TEST(DiagSum, BasicsAndDirectPath) {
  Sample zero;
  zero.y = Eigen::MatrixXd::Zero(4, 4);
  EXPECT_EQ(diag_sum(zero), 0.0);
  EXPECT_THROW(diag_sum(binary_sample(Eigen::MatrixXd::Zero(3, 3))), std::invalid_argument);
  auto p = gauss(60, 20, 2, {half, half});
  for (std::uint64_t seed : {1u, 2u, 3u}) EXPECT_NEAR(diag_sum_direct(p, seed), diag_sum(sample_gaussian(p, seed)), 1e-9);
}

TEST(DiagSum, MonteCarloMomentsUnderP) {
  auto p = gauss(400, 60, Rational(3, 2), {Rational(1, 3), Rational(2, 3)});
  const auto an = diag_moments(p);
  EXPECT_EQ(an.mean, 2 * 60 * Rational(3, 2));
  std::vector<double> v;
  for (int r = 0; r < 2000; ++r) v.push_back(diag_sum_direct(p, rng::derive_seed(9, "diag", r)));
  const auto e = empirical(v);
  EXPECT_NEAR(e.mean, to_double(an.mean), 5 * std::sqrt(e.var / v.size()));
  // Standard error of a sample variance, normal approximation.
  EXPECT_LE(e.var, to_double(an.var_bound) + 5 * e.var * std::sqrt(2.0 / (v.size() - 1)));
}

TEST(DiagMoments, MeanGapIsMTildeKLambda) {
  auto p = gauss(100, 30, Rational(2, 3), {1});
  auto q = gauss(100, 30, Rational(2, 3), {Rational(1, 4), Rational(1, 4), Rational(1, 2)});
  EXPECT_EQ(abs_rat(diag_moments(p).mean - diag_moments(q).mean), 2 * 30 * Rational(2, 3));
}

TEST(SignedTriangles, SmallGraphs) {
  EXPECT_EQ(signed_triangles(binary_sample(Eigen::MatrixXd::Zero(5, 5)), 0.0), 0.0);
  Eigen::MatrixXd k3 = Eigen::MatrixXd::Ones(3, 3);
  k3.diagonal().setZero();
  EXPECT_DOUBLE_EQ(signed_triangles(binary_sample(k3), 0.0), 1.0);
  auto r = centered_matrix<Rational>(binary_sample(k3), Rational(1, 5));
  EXPECT_EQ(signed_triangles_trace(r), pow_rat(Rational(4, 5), 3));
  EXPECT_EQ(signed_triangles_naive(r), pow_rat(Rational(4, 5), 3));
}

TEST(SignedTriangles, TraceIdentityExactAndFastPath) {
  for (int t = 0; t < 10; ++t) {
    auto p = binary(8 + 2 * t, 5 + t, Rational(1, 5), Rational(1, 20), half, {half, half});
    auto s = sample_binary(p, 40 + t);
    auto r = centered_matrix<Rational>(s, p.q);
    const Rational exact = signed_triangles_naive(r);
    EXPECT_EQ(signed_triangles_trace(r), exact);
    EXPECT_NEAR(signed_triangles(s, 0.2), to_double(exact), 1e-9 * (1 + std::abs(to_double(exact))));
  }
}

TEST(SignedTriangles, MonteCarloMeanUnderP) {
  auto p = binary(60, 40, Rational(1, 5), Rational(1, 10), half, {1});
  const auto an = tri_moments(p);
  std::vector<double> v;
  for (int r = 0; r < 600; ++r) v.push_back(signed_triangles(sample_binary(p, rng::derive_seed(3, "tri", r)), 0.2));
  const auto e = empirical(v);
  EXPECT_NEAR(e.mean, to_double(an.mean), 5 * std::sqrt(e.var / v.size()));
  EXPECT_LE(e.var, to_double(an.var_bound));
}

TEST(TriMoments, Examples) {
  auto null = tri_moments(binary(50, 20, Rational(1, 5), 0, half, {1}));
  EXPECT_EQ(null.mean, 0);
  EXPECT_EQ(null.var_bound, Rational(125000) * Rational(1, 125) / 3);
  auto p = binary(300, 150, Rational(1, 5), Rational(1, 10), half, {1});
  EXPECT_EQ(tri_moments(p).mean, Rational(binomial(300, 3)) * Rational(150 * 150 * 150) / 1000 / Rational(27000000));
  auto q = binary(300, 150, Rational(1, 5), Rational(1, 10), half, {half, half});
  EXPECT_EQ(abs_rat(tri_moments(p).mean - tri_moments(q).mean),
            Rational(binomial(300, 3)) * 1 * pow_rat(Rational(150), 3) * pow_rat(Rational(1, 10), 3) / pow_rat(300, 3));
}

TEST(EdgeKernel, ExhaustiveConditioningOnThreeVertices) {
  // All three vertices in community c; Y_01 is Bernoulli(q + s / x_c).
  auto p = binary(3, 3, Rational(1, 5), Rational(1, 10), Rational(3, 5), {Rational(1, 4), Rational(3, 4)});
  for (int c = 0; c < 2; ++c) {
    const Rational prob = p.q + p.s / p.x[c];
    Rational m1 = 0, m2 = 0;
    for (int y = 0; y <= 1; ++y) {
      const Rational w = y ? prob : 1 - prob;
      const Rational r = Rational(y) - p.q;
      m1 += w * r;
      m2 += w * r * r;
    }
    const auto k = edge_kernel(p, c);
    EXPECT_EQ(k.mean, m1);
    EXPECT_EQ(k.second, m2);
  }
}

TEST(RunExperiment, EqualModelsAreIndistinguishable) {
  auto p = gauss(200, 30, 1, {1});
  auto rep = run_experiment(p, p, 400, 5);
  EXPECT_NEAR(rep.error_rate, 0.5, 0.1);
  EXPECT_LT(rep.separation_ratio, 0.5);
  EXPECT_THROW(run_experiment(p, p, 49, 5), std::invalid_argument);
}

TEST(RunExperiment, DeterministicAcrossThreads) {
  auto p = binary(80, 40, Rational(1, 5), Rational(1, 10), half, {1});
  auto q = binary(80, 40, Rational(1, 5), Rational(1, 10), half, {half, half});
  auto a = run_experiment(p, q, 60, 11, 1), b = run_experiment(p, q, 60, 11, 3);
  EXPECT_EQ(a.values_p, b.values_p);
  EXPECT_EQ(a.values_q, b.values_q);
  EXPECT_EQ(a.error_rate, b.error_rate);
  EXPECT_GE(a.error_rate, 0.0);
  EXPECT_LE(a.error_rate, 1.0);
}

TEST(RunExperiment, GaussianEasyRegimeSeparates) {
  // M tilde^2 lambda^2 k^2 / n = 25.
  auto p = gauss(400, 100, 1, {1}), q = gauss(400, 100, 1, {half, half});
  auto rep = run_experiment(p, q, 100, 2);
  EXPECT_LE(rep.error_rate, 0.05);
}
