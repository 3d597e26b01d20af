#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cxnprobe/assignment.hpp"
#include "cxnprobe/construction.hpp"
#include "cxnprobe/sortlab.hpp"
#include "oracles.hpp"

using namespace cxnprobe;

namespace {

std::vector<int> random_labels(std::mt19937_64& gen, std::size_t n, int k) {
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<int> v(n);
  for (auto& x : v) x = pick(gen);
  return v;
}

}  // namespace

TEST(Assignment, MinCostSmallExample) {
  const std::vector<std::vector<int>> cost = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  const auto a = min_cost_assignment(cost);
  EXPECT_EQ(a.total, 5);
  EXPECT_EQ(a.row_to_col, (std::vector<std::size_t>{1, 0, 2}));
}

TEST(Assignment, RectangularTakesBestColumns) {
  const std::vector<std::vector<int>> w = {{1, 9, 2, 0}, {8, 7, 1, 3}};
  const auto a = max_weight_assignment(w);
  EXPECT_EQ(a.total, 17);
}

TEST(Assignment, MatchesBijectionOracleOnRandomTables) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<long long> cell(0, 9);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::vector<long long>> t(4, std::vector<long long>(4));
    long long total = 0;
    for (auto& row : t) {
      for (auto& x : row) total += (x = cell(gen));
    }
    EXPECT_EQ(total - max_weight_assignment(t).total, oracle::deviation_by_bijections(t));
  }
}

TEST(SortDeviation, PureSortIsZero) {
  std::vector<int> x = {0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3};
  EXPECT_EQ(sort_deviation(x, x), 0);
}

TEST(SortDeviation, FullyMixedClustersGiveTwelve) {
  std::vector<int> clusters, labels;
  for (int c = 0; c < 4; ++c) {
    for (int l = 0; l < 4; ++l) {
      clusters.push_back(c);
      labels.push_back(l);
    }
  }
  EXPECT_EQ(sort_deviation(clusters, labels), 12);
  EXPECT_EQ(oracle::deviation_by_bijections(oracle::contingency(clusters, labels, 4)), 12);
}

TEST(SortDeviation, WorksWithConstructionAndStringLabels) {
  std::vector<int> clusters = {0, 0, 1, 1};
  std::vector<Construction> cx = {Construction::transitive, Construction::transitive,
                                  Construction::resultative, Construction::ditransitive};
  std::vector<std::string> verbs = {"cut", "hit", "cut", "hit"};
  EXPECT_EQ(sort_deviation(clusters, cx), 1);
  EXPECT_EQ(sort_deviation(clusters, verbs), 2);
}

TEST(SortDeviation, LengthMismatchIsArgumentError) {
  std::vector<int> a = {0, 1}, b = {0};
  try {
    sort_deviation(a, b);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::argument);
  }
}

TEST(SortDeviation, EmptyInputIsZero) {
  std::vector<int> a, b;
  EXPECT_EQ(sort_deviation(a, b), 0);
}

TEST(SortDeviation, RangeAndIdentityOnRandomInputs) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto a = random_labels(gen, 16, 4);
    const auto b = random_labels(gen, 16, 4);
    const int d = sort_deviation(a, b);
    EXPECT_GE(d, 0);
    EXPECT_LE(d, 12);
    EXPECT_EQ(sort_deviation(a, a), 0);
    EXPECT_EQ(d, oracle::deviation_by_bijections(oracle::contingency(a, b, 4)));
  }
}

TEST(SortDeviation, InvariantUnderRelabelingAndItemOrder) {
  std::mt19937_64 gen(9);
  std::array<int, 4> perm = {0, 1, 2, 3};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_labels(gen, 16, 4);
    const auto b = random_labels(gen, 16, 4);
    const int d = sort_deviation(a, b);

    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<int> ra(a.size());
    std::vector<std::string> rb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ra[i] = perm[a[i]] + 100;
      rb[i] = "label" + std::to_string(perm[b[i]]);
    }
    EXPECT_EQ(sort_deviation(ra, rb), d);

    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);
    std::vector<int> pa, pb;
    for (auto i : order) {
      pa.push_back(a[i]);
      pb.push_back(b[i]);
    }
    EXPECT_EQ(sort_deviation(pa, pb), d);
  }
}
