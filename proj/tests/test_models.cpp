#include "lowdeg/models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace lowdeg;

namespace {

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

const Rational half(1, 2);

}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW(gauss(10, 5, 1, {half, half}).validate());
  EXPECT_THROW(gauss(10, 5, 1, {half, Rational(1, 3)}).validate(), parameter_error);
  EXPECT_THROW(gauss(10, 11, 1, {1}).validate(), parameter_error);
  auto uneven = gauss(10, 5, 1, {Rational(1, 10), Rational(9, 10)});
  uneven.C = half;
  EXPECT_THROW(uneven.validate(), parameter_error);  // M * min x = 1/5 < 1/2

  EXPECT_NO_THROW(binary(10, 5, Rational(1, 5), Rational(1, 10), half, {half, half}).validate());
  try {
    binary(10, 5, Rational(1, 5), Rational(1, 5), half, {half, half}).validate();
    FAIL();
  } catch (const parameter_error& e) {
    EXPECT_NE(std::string(e.what()).find("tau1"), std::string::npos);
  }
  EXPECT_THROW(binary(10, 5, 0, 0, half, {1}).validate(), parameter_error);
}

TEST(SampleLabels, DegenerateDensities) {
  auto full = sample_labels(gauss(200, 200, 1, {1}), 3);
  for (int l : full.labels) EXPECT_EQ(l, 0);
  auto none = sample_labels(gauss(200, 0, 1, {1}), 3);
  for (int l : none.labels) EXPECT_EQ(l, LabelAssignment::kStar);
}

TEST(SampleLabels, FrequenciesWithinFiveStandardErrors) {
  const std::int64_t n = 100000;
  auto sigma = sample_labels(gauss(n, 10000, 1, {half, half}), 11);
  std::array<long, 3> counts{};
  for (int l : sigma.labels) ++counts[l == LabelAssignment::kStar ? 2 : l];
  const std::array<double, 3> expect{0.05, 0.05, 0.9};
  for (int c = 0; c < 3; ++c) {
    const double se = std::sqrt(expect[c] * (1 - expect[c]) / n);
    EXPECT_NEAR(static_cast<double>(counts[c]) / n, expect[c], 5 * se);
  }
}

TEST(SampleGaussian, NullIsStandardNormal) {
  auto s = sample_gaussian(gauss(300, 30, 0, {1}), 5);
  double sum = 0, sq = 0;
  long cnt = 0;
  for (int i = 0; i < 300; ++i)
    for (int j = i; j < 300; ++j) {
      EXPECT_EQ(s.y(i, j), s.y(j, i));
      sum += s.y(i, j);
      sq += s.y(i, j) * s.y(i, j);
      ++cnt;
    }
  EXPECT_NEAR(sum / cnt, 0.0, 5 / std::sqrt(static_cast<double>(cnt)));
  EXPECT_NEAR(sq / cnt, 1.0, 5 * std::sqrt(2.0 / cnt));
}

TEST(SampleGaussian, ConditionalMeanAndVarianceMatchMeanMatrix) {
  auto p = gauss(50, 25, 3, {half, half});
  double resid = 0, resid_sq = 0;
  long cnt = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto s = sample_gaussian(p, seed);
    auto mean = mean_matrix(PriorSpec::gaussian(p), s.sigma);
    for (int i = 0; i < 50; ++i)
      for (int j = i; j < 50; ++j) {
        const double z = s.y(i, j) - mean(i, j);
        resid += z;
        resid_sq += z * z;
        ++cnt;
      }
  }
  EXPECT_NEAR(resid / cnt, 0.0, 5 / std::sqrt(static_cast<double>(cnt)));
  EXPECT_NEAR(resid_sq / cnt, 1.0, 5 * std::sqrt(2.0 / cnt));
}

TEST(SampleGaussian, SingleCommunityMeanIsLambda) {
  auto p = gauss(4, 4, Rational(7, 3), {1});
  LabelAssignment all{{0, 0, 0, 0}};
  auto m = mean_matrix(PriorSpec::gaussian(p), all);
  EXPECT_DOUBLE_EQ(m(1, 2), 7.0 / 3);
  EXPECT_EQ(mean_entry(PriorSpec::gaussian(p), 0, 0), Rational(7, 3));
}

TEST(SampleGaussian, DeterministicAndThreadIndependent) {
  auto p = gauss(120, 40, 1, {half, half});
  auto a = sample_gaussian(p, 99, 1);
  auto b = sample_gaussian(p, 99, 4);
  auto c = sample_gaussian(p, 100, 1);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.sigma.labels, b.sigma.labels);
  EXPECT_NE(a.y, c.y);
}

TEST(SampleBinary, ErdosRenyiDensity) {
  auto p = binary(400, 0, Rational(1, 10), 0, half, {1});
  auto s = sample_binary(p, 17);
  long edges = 0;
  for (int i = 0; i < 400; ++i) {
    EXPECT_EQ(s.y(i, i), 0.0);
    for (int j = i + 1; j < 400; ++j) edges += static_cast<long>(s.y(i, j));
  }
  const double pairs = 400.0 * 399 / 2;
  EXPECT_NEAR(edges / pairs, 0.1, 5 * std::sqrt(0.09 / pairs));
}

TEST(SampleBinary, WithinCommunityDensity) {
  auto p = binary(2000, 1000, Rational(1, 10), Rational(1, 10), Rational(1, 2), {half, half});
  auto s = sample_binary(p, 4, 2);
  EXPECT_EQ(s.y, s.y.transpose());
  std::array<long, 2> inside{}, pairs{};
  long outside = 0, outside_pairs = 0;
  for (int i = 0; i < 2000; ++i)
    for (int j = i + 1; j < 2000; ++j) {
      const int li = s.sigma[i];
      if (li != LabelAssignment::kStar && li == s.sigma[j]) {
        ++pairs[li];
        inside[li] += static_cast<long>(s.y(i, j));
      } else {
        ++outside_pairs;
        outside += static_cast<long>(s.y(i, j));
      }
    }
  for (int l = 0; l < 2; ++l) {
    const double pr = 0.3;  // q + s / x_l
    EXPECT_NEAR(static_cast<double>(inside[l]) / pairs[l], pr, 5 * std::sqrt(pr * (1 - pr) / pairs[l]));
  }
  EXPECT_NEAR(static_cast<double>(outside) / outside_pairs, 0.1, 5 * std::sqrt(0.09 / outside_pairs));
}

TEST(MeanMatrix, Examples) {
  PriorSpec spec{2, Rational(1, 2), {half, half}};
  LabelAssignment stars{{-1, -1, -1}};
  EXPECT_TRUE(mean_matrix(spec, stars).isZero());

  BinaryParams b = binary(10, 5, Rational(1, 5), Rational(1, 10), half, {half, half});
  EXPECT_EQ(mean_entry(PriorSpec::binary(b), 1, 1), Rational(2, 5));
  EXPECT_EQ(mean_entry(PriorSpec::binary(b), 0, 1), Rational(1, 5));

  PriorSpec zero{0, 0, {1}};
  auto shifted = zero.transformed(2, 3);
  auto m = mean_matrix(shifted, LabelAssignment{{0, -1}});
  EXPECT_TRUE((m.array() == 3.0).all());
  EXPECT_THROW(zero.transformed(0, 1), std::invalid_argument);
}

TEST(SampleCsv, HeaderAndRows) {
  auto p = binary(3, 3, Rational(1, 5), 0, half, {1});
  auto s = sample_binary(p, 1);
  std::ostringstream os;
  write_sample_csv(os, s, {{"seed", "1"}, {"mode", "binary"}});
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("# mode=binary\n# seed=1\ni,j,value\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3 + 3);
}
