#pragma once

// Reference implementations used only by the tests. Each one is written
// the slow, obvious way and shares no code with the library.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <string>
#include <thread>
#include <vector>

namespace oracle {

// N minus the best total over all k! bijections of a k x k table.
inline long long deviation_by_bijections(const std::vector<std::vector<long long>>& table) {
  const std::size_t k = table.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  long long total = 0;
  for (const auto& row : table) total += std::accumulate(row.begin(), row.end(), 0LL);
  long long best = std::numeric_limits<long long>::min();
  do {
    long long s = 0;
    for (std::size_t r = 0; r < k; ++r) s += table[r][perm[r]];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total - best;
}

// Contingency table of cluster ids x labels, both densely numbered 0..k-1.
inline std::vector<std::vector<long long>> contingency(const std::vector<int>& a,
                                                       const std::vector<int>& b, std::size_t k) {
  std::vector<std::vector<long long>> t(k, std::vector<long long>(k, 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++t[a[i]][b[i]];
  return t;
}

// Ward clustering recomputed from cluster members at every step. The merge
// cost is the increase in within-cluster sum of squares. Clusters are named
// by their smallest member; ties go to the lexicographically smallest pair.
inline std::vector<int> naive_ward(const Eigen::MatrixXd& x, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  auto sse = [&](const std::vector<std::size_t>& members) {
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(x.cols());
    for (auto m : members) c += x.row(m);
    c /= static_cast<double>(members.size());
    double s = 0.0;
    for (auto m : members) s += (x.row(m) - c).squaredNorm();
    return s;
  };
  while (clusters.size() > k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        auto merged = clusters[a];
        merged.insert(merged.end(), clusters[b].begin(), clusters[b].end());
        const double cost = sse(merged) - sse(clusters[a]) - sse(clusters[b]);
        if (cost < best) {
          best = cost;
          ba = a;
          bb = b;
        }
      }
    }
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<long>(bb));
  }
  std::vector<int> labels(n);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (auto m : clusters[c]) labels[m] = static_cast<int>(c);
  }
  return labels;
}

// True when two labelings induce the same partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it1, fresh1] = ab.emplace(a[i], b[i]);
    auto [it2, fresh2] = ba.emplace(b[i], a[i]);
    if (it1->second != b[i] || it2->second != a[i]) return false;
  }
  return true;
}

// Two-sided sign-flip permutation p-value for the mean of paired
// differences, Monte Carlo over `draws` random flips.
inline double sign_flip_p(const std::vector<double>& a, const std::vector<double>& b,
                          std::size_t draws, std::uint64_t seed, unsigned threads = 0) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double observed = std::fabs(std::accumulate(d.begin(), d.end(), 0.0));
  const double eps = 1e-12 * (1.0 + observed);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::size_t> hits(threads, 0);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      std::mt19937_64 gen(seed * 1000003ULL + t);
      const std::size_t share = draws / threads + (t < draws % threads ? 1 : 0);
      std::size_t local = 0;
      for (std::size_t r = 0; r < share; ++r) {
        double s = 0.0;
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (i % 64 == 0) bits = gen();
          s += (bits & 1) ? d[i] : -d[i];
          bits >>= 1;
        }
        if (std::fabs(s) >= observed - eps) ++local;
      }
      hits[t] = local;
    });
  }
  for (auto& th : pool) th.join();
  return static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::size_t{0})) /
         static_cast<double>(draws);
}

struct MeanVar {
  std::vector<double> mean;
  std::vector<double> var;  // population
};

// Plain two-pass mean and population variance per column.
inline MeanVar two_pass(const std::vector<float>& data, std::size_t rows, std::size_t dim) {
  MeanVar out{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t d = 0; d < dim; ++d) out.mean[d] += data[r * dim + d];
  }
  for (auto& m : out.mean) m /= static_cast<double>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double e = data[r * dim + d] - out.mean[d];
      out.var[d] += e * e;
    }
  }
  for (auto& v : out.var) v /= static_cast<double>(rows);
  return out;
}

inline double scalar_distance(const float* a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    s += (static_cast<double>(a[i]) - b[i]) * (static_cast<double>(a[i]) - b[i]);
  }
  return std::sqrt(s);
}

// Template patterns for the four nonsense-sentence frames. Group 1 is the
// subject pronoun, group 2 the verb.
inline const std::map<std::string, std::regex>& jabberwocky_patterns() {
  static const std::map<std::string, std::regex> patterns = {
      {"ditransitive", std::regex(R"(^(She|He) ([a-z\-]+) (him|her) the ([a-z\-]+)\.$)")},
      {"resultative", std::regex(R"(^(She|He) ([a-z\-]+) it ([a-z\-]+)\.$)")},
      {"caused-motion", std::regex(R"(^(She|He) ([a-z\-]+) it on the ([a-z\-]+)\.$)")},
      {"removal", std::regex(R"(^(She|He) ([a-z\-]+) it from (him|her)\.$)")},
  };
  return patterns;
}

}  // namespace oracle
