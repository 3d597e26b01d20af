#pragma once

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cxnprobe/error.hpp"

namespace cxnprobe {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double x) const { return lower <= x && x <= upper; }
};

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) throw Error(Errc::argument, "mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Sample (n - 1) standard deviation, two-pass.
inline double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Two-sided 95% t-interval for the mean. A single value yields the
// degenerate interval [x, x].
inline Interval ci95(std::span<const double> xs) {
  const double m = mean_of(xs);
  if (xs.size() < 2) return {m, m};
  boost::math::students_t dist(static_cast<double>(xs.size() - 1));
  const double half = boost::math::quantile(dist, 0.975) * sample_sd(xs) /
                      std::sqrt(static_cast<double>(xs.size()));
  return {m - half, m + half};
}

struct SignTest {
  std::size_t positive = 0;
  std::size_t negative = 0;
  double p_value = 1.0;
};

struct PairedComparison {
  double statistic = 0.0;
  double p_value = 1.0;
  std::string method = "paired-t";
  double df = 0.0;
  double mean_difference = 0.0;
  bool degenerate = false;
  SignTest sign_test;
};

// Exact two-sided sign test on the nonzero differences.
inline SignTest sign_test(std::span<const double> diffs) {
  SignTest out;
  for (double d : diffs) {
    if (d > 0) ++out.positive;
    if (d < 0) ++out.negative;
  }
  const std::size_t n = out.positive + out.negative;
  if (n == 0) return out;
  boost::math::binomial dist(static_cast<double>(n), 0.5);
  const double tail = boost::math::cdf(dist, static_cast<double>(std::min(out.positive, out.negative)));
  out.p_value = std::min(1.0, 2.0 * tail);
  return out;
}

// Paired two-sided t-test of mean(a) vs mean(b), with a sign test alongside.
// Zero variance of the differences is flagged degenerate: p = 1 when all
// differences are zero, p = 0 otherwise.
inline PairedComparison paired_compare(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(Errc::argument, "paired samples differ in length");
  if (a.size() < 2) throw Error(Errc::argument, "paired comparison needs at least 2 pairs");
  std::vector<double> diffs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];

  PairedComparison out;
  out.df = static_cast<double>(diffs.size() - 1);
  out.mean_difference = mean_of(diffs);
  out.sign_test = sign_test(diffs);
  const double sd = sample_sd(diffs);
  if (!(sd > 0.0)) {
    out.degenerate = true;
    if (out.mean_difference == 0.0) {
      out.statistic = 0.0;
      out.p_value = 1.0;
    } else {
      out.statistic = std::copysign(std::numeric_limits<double>::infinity(), out.mean_difference);
      out.p_value = 0.0;
    }
    return out;
  }
  out.statistic = out.mean_difference / (sd / std::sqrt(static_cast<double>(diffs.size())));
  boost::math::students_t dist(out.df);
  out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(out.statistic))));
  return out;
}

}  // namespace cxnprobe
