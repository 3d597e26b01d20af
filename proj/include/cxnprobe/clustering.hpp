#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "cxnprobe/error.hpp"

namespace cxnprobe {

enum class Linkage { ward, complete, average };

inline std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::ward: return "ward";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "?";
}

inline Linkage parse_linkage(std::string_view s) {
  if (s == "ward") return Linkage::ward;
  if (s == "complete") return Linkage::complete;
  if (s == "average") return Linkage::average;
  throw Error(Errc::argument, "unknown linkage '" + std::string(s) + "'");
}

// Relabels so cluster ids appear in order of first occurrence (0, 1, ...).
inline std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::vector<int> out(labels.size());
  std::vector<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int id = -1;
    for (const auto& [from, to] : seen) {
      if (from == labels[i]) id = to;
    }
    if (id < 0) {
      id = static_cast<int>(seen.size());
      seen.emplace_back(labels[i], id);
    }
    out[i] = id;
  }
  return out;
}

// Bottom-up agglomerative clustering of the rows of `points` into exactly
// k clusters by Euclidean distance. Distances between clusters are updated
// with the Lance-Williams recurrence; for Ward the stored quantity is the
// squared-distance merge criterion. Each step merges the closest active
// pair; ties go to the smallest (i, j) slot pair, where slot i always
// holds point i.
inline std::vector<int> cluster_agglomerative(const Eigen::MatrixXd& points, std::size_t k,
                                              Linkage linkage = Linkage::ward) {
  const std::size_t n = static_cast<std::size_t>(points.rows());
  if (k == 0 || n < k) {
    throw Error(Errc::argument, "cannot form " + std::to_string(k) + " clusters from " +
                                    std::to_string(n) + " points");
  }
  if (!points.allFinite()) throw Error(Errc::argument, "clustering input has non-finite values");

  Eigen::MatrixXd d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sq = (points.row(i) - points.row(j)).squaredNorm();
      d(i, j) = d(j, i) = linkage == Linkage::ward ? sq : std::sqrt(sq);
    }
  }
  std::vector<std::size_t> size(n, 1);
  std::vector<char> active(n, 1);
  std::vector<int> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[i] = static_cast<int>(i);

  for (std::size_t clusters = n; clusters > k; --clusters) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && d(i, j) < best) {
          best = d(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    const double ni = static_cast<double>(size[bi]);
    const double nj = static_cast<double>(size[bj]);
    for (std::size_t x = 0; x < n; ++x) {
      if (!active[x] || x == bi || x == bj) continue;
      double updated = 0.0;
      switch (linkage) {
        case Linkage::ward: {
          const double nx = static_cast<double>(size[x]);
          updated = ((ni + nx) * d(bi, x) + (nj + nx) * d(bj, x) - nx * d(bi, bj)) /
                    (ni + nj + nx);
          break;
        }
        case Linkage::complete: updated = std::max(d(bi, x), d(bj, x)); break;
        case Linkage::average: updated = (ni * d(bi, x) + nj * d(bj, x)) / (ni + nj); break;
      }
      d(bi, x) = d(x, bi) = updated;
    }
    size[bi] += size[bj];
    active[bj] = 0;
    for (auto& o : owner) {
      if (o == static_cast<int>(bj)) o = static_cast<int>(bi);
    }
  }
  return canonical_labels(owner);
}

}  // namespace cxnprobe
