#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "cxnprobe/stats.hpp"
#include "oracles.hpp"

using namespace cxnprobe;

TEST(Stats, EqualSamplesAreDegenerateWithPOne) {
  std::vector<double> a = {1, 2, 3, 4};
  const auto r = paired_compare(a, a);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.sign_test.p_value, 1.0);
  EXPECT_EQ(r.method, "paired-t");
}

TEST(Stats, ConstantShiftIsDegenerateWithPZero) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n;
  std::vector<double> a(100), b(100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    b[i] = n(gen);
    a[i] = b[i] + 1.0;
  }
  const auto r = paired_compare(a, b);
  EXPECT_LT(r.p_value, 1e-10);
  EXPECT_GT(r.mean_difference, 0.0);
  EXPECT_LT(r.sign_test.p_value, 1e-10);
}

TEST(Stats, KnownTTest) {
  // d = {1, 2, 3, 4, 5}: mean 3, sd sqrt(2.5), t = 3 / (sqrt(2.5)/sqrt(5)) = 4.2426
  std::vector<double> a = {1, 2, 3, 4, 5}, b = {0, 0, 0, 0, 0};
  const auto r = paired_compare(a, b);
  EXPECT_NEAR(r.statistic, 4.242640687, 1e-8);
  EXPECT_EQ(r.df, 4.0);
  EXPECT_NEAR(r.p_value, 0.013236, 1e-5);
  EXPECT_EQ(r.sign_test.positive, 5u);
  EXPECT_NEAR(r.sign_test.p_value, 0.0625, 1e-12);
}

TEST(Stats, Errors) {
  std::vector<double> a = {1}, b = {2};
  EXPECT_THROW(paired_compare(a, b), Error);
  std::vector<double> c = {1, 2, 3};
  EXPECT_THROW(paired_compare(a, c), Error);
  std::vector<double> empty;
  EXPECT_THROW(mean_of(empty), Error);
}

TEST(Stats, CiContainsMeanAndMatchesHandValue) {
  std::vector<double> xs = {2, 4, 4, 4, 5, 5, 7, 9};
  const auto ci = ci95(xs);
  const double m = mean_of(xs);
  EXPECT_TRUE(ci.contains(m));
  // sd = 2.138090, t(7, .975) = 2.364624
  EXPECT_NEAR(ci.upper - m, 2.364624252 * 2.138089935 / std::sqrt(8.0), 1e-6);
  std::vector<double> one = {3.5};
  EXPECT_EQ(ci95(one).lower, 3.5);
  EXPECT_EQ(ci95(one).upper, 3.5);
}

TEST(Stats, PValuesInUnitInterval) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(10), b(10);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = n(gen);
      b[i] = n(gen) + 0.3;
    }
    const auto r = paired_compare(a, b);
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
  }
}

TEST(Stats, AgreesWithPermutationOracle) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> n;
  for (double shift : {0.0, 0.15, 0.3}) {
    std::vector<double> a(100), b(100);
    for (std::size_t i = 0; i < a.size(); ++i) {
      b[i] = n(gen);
      a[i] = b[i] + shift + n(gen);
    }
    const double expected = oracle::sign_flip_p(a, b, 200000, 17);
    EXPECT_NEAR(paired_compare(a, b).p_value, expected, 0.01) << "shift " << shift;
  }
}
