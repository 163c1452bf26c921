#include "lowdeg/advantage.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lowdeg;

namespace {

const Rational half(1, 2), third(1, 3);

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

}  // namespace

TEST(AdvGaussian, EqualModelsGiveOne) {
  auto p = gauss(50, 10, Rational(3, 2), {half, half});
  for (int D = 0; D <= 5; ++D) {
    auto rep = adv_bound_gaussian(p, p, D);
    EXPECT_EQ(rep.total_sq, 1);
    EXPECT_EQ(rep.total_bound, 1.0);
  }
}

TEST(AdvGaussian, DegreeOneOnlyLoopContributes) {
  const Rational lam(2, 5), rho(3, 20);
  auto p = gauss(40, 6, lam, {1}), q = gauss(40, 6, lam, {half, half});
  auto rep = adv_bound_gaussian(p, q, 1);
  EXPECT_TRUE(rep.forests_dropped);
  EXPECT_EQ(rep.total_sq, 1 + 40 * lam * lam * rho * rho);
  ASSERT_EQ(rep.contributions.size(), 1u);
  EXPECT_EQ(rep.contributions.begin()->first, std::make_pair(1, 1));
  EXPECT_EQ(rep.M_hat, 2);
  EXPECT_EQ(rep.M_tilde, 1);
}

TEST(AdvGaussian, DroppingForestsMatchesFullSum) {
  const Rational lam(1, 2);
  auto p = gauss(7, 3, lam, {1}), q = gauss(7, 3, lam, {third, third, third});
  for (int D = 1; D <= 4; ++D) {
    auto rep = adv_bound_gaussian(p, q, D);
    ASSERT_TRUE(rep.forests_dropped);
    Rational full = 1;
    RTable t(PriorSpec::gaussian(p), PriorSpec::gaussian(q), {false, false});
    for (const auto& g : enumerate_classes(D, true, false).classes)
      full += Rational(labeled_copy_count(g, 7)) * t.r(g) * t.r(g) / Rational(alpha_factorial(g));
    EXPECT_EQ(rep.total_sq, full) << "D=" << D;
  }
}

TEST(AdvGaussian, UnequalLambdaKeepsForests) {
  auto p = gauss(9, 3, 1, {1}), q = gauss(9, 3, half, {1});
  auto rep = adv_bound_gaussian(p, q, 2);
  EXPECT_FALSE(rep.forests_dropped);
  EXPECT_TRUE(rep.contributions.count({1, 2}));  // the single edge
  EXPECT_GT(rep.total_bound, 1.0);
}

TEST(AdvGaussian, MonotoneInDAndThreadIndependent) {
  auto p = gauss(30, 8, Rational(3, 4), {1}), q = gauss(30, 8, Rational(3, 4), {half, half});
  Rational prev = 1;
  for (int D = 1; D <= 5; ++D) {
    auto rep = adv_bound_gaussian(p, q, D);
    EXPECT_GE(rep.total_sq, prev);
    prev = rep.total_sq;
    Rational sum = 1;
    for (const auto& [key, value] : rep.contributions) {
      EXPECT_GT(value, 0);
      sum += value;
    }
    EXPECT_EQ(sum, rep.total_sq);
  }
  AdvOptions three;
  three.threads = 3;
  EXPECT_EQ(adv_bound_gaussian(p, q, 5, three).contributions, adv_bound_gaussian(p, q, 5).contributions);
}

TEST(AdvGaussian, RejectsMismatchedN) {
  auto p = gauss(30, 8, 1, {1}), q = gauss(31, 8, 1, {1});
  EXPECT_THROW(adv_bound_gaussian(p, q, 2), parameter_error);
  EXPECT_THROW(adv_bound_gaussian(p, p, 8), size_limit_error);
}

TEST(AdvBinary, EqualModelsAndDegreeTwo) {
  auto p = binary(40, 10, Rational(1, 5), Rational(1, 10), half, {1});
  auto q = binary(40, 10, Rational(1, 5), Rational(1, 10), half, {half, half});
  EXPECT_EQ(adv_bound_binary(p, p, 4).total_sq, 1);
  EXPECT_EQ(adv_bound_binary(p, q, 2).total_sq, 1);
}

TEST(AdvBinary, DegreeThreeIsTheTriangle) {
  const Rational qv(1, 5), s(1, 10), tau1(1, 2), rho(1, 4);
  auto p = binary(40, 10, qv, s, tau1, {1});
  auto q = binary(40, 10, qv, s, tau1, {half, half});
  auto rep = adv_bound_binary(p, q, 3);
  const Rational tri = pow_rat(s * rho, 3) * 1;  // M tilde = 1
  EXPECT_EQ(rep.total_sq, 1 + Rational(binomial(40, 3)) * tri * tri / pow_rat(qv * (1 - tau1), 3));
  EXPECT_EQ(rep.tau0, qv);
}

TEST(AdvBinary, MatchesScaledGaussianSum) {
  const Rational qv(1, 10), s(1, 20), tau1(1, 2);
  auto p = binary(25, 10, qv, s, tau1, {half, half});
  auto q = binary(25, 10, qv, s, tau1, {third, third, third});
  const Rational denom = qv * (1 - tau1);
  for (int D = 3; D <= 6; ++D) {
    // r at lambda = 1, rescaled by s^d, on simple loop-free classes.
    RTable unit(PriorSpec{1, p.density(), p.x}, PriorSpec{1, q.density(), q.x});
    Rational sum = 1;
    for (const auto& g : enumerate_classes(CatalogOptions{D, false, false, false}).classes) {
      const Rational r = pow_rat(s, g.d()) * unit.r(g);
      sum += Rational(labeled_copy_count(g, 25)) * r * r / pow_rat(denom, g.d());
    }
    EXPECT_EQ(adv_bound_binary(p, q, D).total_sq, sum) << "D=" << D;
  }
}

TEST(SeriesBound, Examples) {
  EXPECT_EQ(series_bound(4, 2, 0, 1, 10, 100), 1.0);
  EXPECT_TRUE(std::isinf(series_bound(2, 2, 1, 1, 10, 100)));
  // t = (2*1*1)^2 * (1/64) * 1 = 1/16; 1 + 1/16
  EXPECT_DOUBLE_EQ(series_bound(1, 1, Rational(1, 64), 1, 1, 100), 1.0625);
}

TEST(SeriesBound, DominatesSquaredBoundInHardRegime) {
  const std::int64_t n = 1000000;
  const Rational k = 3982;  // ceil(n^0.6)
  const int D = 4;
  // D^5 M_hat^2 lambda^2 k^2 / n = 10^-3 with M_hat = 2.
  const double lam = std::sqrt(1e-3 * n / (std::pow(D, 5) * 4 * 3982.0 * 3982.0));
  auto p = gauss(n, k, rational_from_double(lam), {1}), q = gauss(n, k, rational_from_double(lam), {half, half});
  auto rep = adv_bound_gaussian(p, q, D);
  EXPECT_LE(rep.total_bound, 1.01);
  EXPECT_GE(rep.series_bound, to_double(rep.total_sq));
}
