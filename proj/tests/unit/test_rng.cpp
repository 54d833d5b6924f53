#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <vector>

#include "voltarget/rng.hpp"

using namespace voltarget;

TEST(Philox, KnownAnswerVectors) {
  // Random123 kat_vectors for philox4x32-10.
  EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}),
            (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(InverseNormalCdf, MatchesBoostQuantile) {
  const boost::math::normal_distribution<double> nd;
  double worst = 0.0;
  for (int i = 1; i < 2000; ++i) {
    const double p = i / 2000.0;
    const double q = boost::math::quantile(nd, p);
    worst = std::max(worst, std::abs(inverse_normal_cdf(p) - q) / std::max(1.0, std::abs(q)));
  }
  for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5, 0.02425, 0.97575, 1.0 - 1e-10, 1.0 - 1e-15}) {
    const double q = boost::math::quantile(nd, p);
    worst = std::max(worst, std::abs(inverse_normal_cdf(p) - q) / std::abs(q));
  }
  EXPECT_LT(worst, 1e-14);
  EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
}

TEST(InverseNormalCdf, OddSymmetry) {
  for (double p : {0x1p-40, 0x1p-10, 0.1, 0.3, 0.49}) {  // 1 - p exact for the dyadic values
    EXPECT_NEAR(inverse_normal_cdf(p), -inverse_normal_cdf(1.0 - p), 1e-12);
  }
}

TEST(RngStream, DrawsAreAddressable) {
  const RngStream s{42, 0};
  const double first = s.normal(0);
  EXPECT_EQ(first, (RngStream{42, 0}.normal(0)));
  EXPECT_EQ(first, normal_draw(s, 0));
  std::vector<double> block(37);
  s.fill_normal(block, 5);
  for (std::size_t j = 0; j < block.size(); ++j) EXPECT_EQ(block[j], s.normal(5 + j));
  EXPECT_NE(s.normal(0), (RngStream{43, 0}.normal(0)));
  EXPECT_NE(s.normal(0), (RngStream{42, 1}.normal(0)));
}

TEST(RngStream, UniformsInOpenInterval) {
  const RngStream s{0, 0};
  for (std::uint64_t i = 0; i < 100'000; ++i) {
    const double u = s.uniform(i);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngStream, SampleMoments) {
  std::vector<double> z(1'000'000);
  RngStream{2024, 3}.fill_normal(z);
  double sum = 0.0;
  double sum2 = 0.0;
  for (double x : z) {
    sum += x;
    sum2 += x * x;
  }
  const double n = static_cast<double>(z.size());
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1.0);
  EXPECT_LT(std::abs(mean), 4e-3);
  EXPECT_LT(std::abs(var - 1.0), 6e-3);
}

TEST(RngStream, DistinctPathsAreUncorrelated) {
  std::vector<double> a(100'000);
  std::vector<double> b(100'000);
  RngStream{9, 0}.fill_normal(a);
  RngStream{9, 1}.fill_normal(b);
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    sab += a[i] * b[i];
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
  }
  const double n = static_cast<double>(a.size());
  const double cov = sab / n - sa / n * sb / n;
  const double corr = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  EXPECT_LT(std::abs(corr), 0.02);
}

TEST(RngStream, LagOneSerialCorrelation) {
  std::vector<double> z(200'001);
  RngStream{1, 77}.fill_normal(z);
  double s = 0.0;
  for (std::size_t i = 1; i < z.size(); ++i) s += z[i] * z[i - 1];
  EXPECT_LT(std::abs(s / 200'000.0), 5.0 / std::sqrt(200'000.0));
}
