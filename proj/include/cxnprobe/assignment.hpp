#pragma once

#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

#include "cxnprobe/error.hpp"

namespace cxnprobe {

template <typename T>
struct Assignment {
  std::vector<std::size_t> row_to_col;  // one distinct column per row
  T total{};
};

namespace detail {

template <typename T>
constexpr T assignment_infinity() {
  if constexpr (std::is_floating_point_v<T>) {
    return std::numeric_limits<T>::infinity();
  } else {
    return std::numeric_limits<T>::max() / 4;
  }
}

}  // namespace detail

// Minimum-cost assignment of every row to a distinct column (rows <= cols),
// via the O(n^2 m) Hungarian method with row/column potentials.
template <typename T>
Assignment<T> min_cost_assignment(const std::vector<std::vector<T>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost[0].size();
  for (const auto& row : cost) {
    if (row.size() != m) throw Error(Errc::argument, "cost matrix rows differ in length");
  }
  if (n > m) throw Error(Errc::argument, "cost matrix has more rows than columns");

  const T inf = detail::assignment_infinity<T>();
  // 1-based; index 0 is a virtual column used to seed each augmentation.
  std::vector<T> u(n + 1, T{}), v(m + 1, T{});
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<T> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      T delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const T cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment<T> out;
  out.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) out.row_to_col[match[j] - 1] = j - 1;
  }
  for (std::size_t i = 0; i < n; ++i) out.total += cost[i][out.row_to_col[i]];
  return out;
}

template <typename T>
Assignment<T> max_weight_assignment(const std::vector<std::vector<T>>& weight) {
  std::vector<std::vector<T>> cost = weight;
  for (auto& row : cost) {
    for (auto& x : row) x = -x;
  }
  auto out = min_cost_assignment(cost);
  out.total = -out.total;
  return out;
}

}  // namespace cxnprobe
