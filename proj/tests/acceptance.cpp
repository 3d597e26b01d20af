// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "cxnprobe.hpp"
#include "cxnprobe/synthetic.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cxnprobe;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Stimulus> flatten(const std::vector<StimulusSet>& sets) {
  std::vector<Stimulus> out;
  for (const auto& s : sets) out.insert(out.end(), s.grid.begin(), s.grid.end());
  return out;
}

// Expands a 4x4 count table into parallel cluster/label vectors.
void expand(const std::vector<std::vector<long long>>& t, std::vector<int>& clusters, std::vector<int>& labels) {
  clusters.clear();
  labels.clear();
  for (int c = 0; c < 4; ++c) {
    for (int l = 0; l < 4; ++l) {
      for (long long n = 0; n < t[c][l]; ++n) {
        clusters.push_back(c);
        labels.push_back(l);
      }
    }
  }
}

Outcome assignment_oracle() {
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<long long> cell(0, 8);
  std::vector<std::vector<std::vector<long long>>> tables(10000, std::vector<std::vector<long long>>(4, std::vector<long long>(4)));
  for (auto& t : tables) {
    for (auto& row : t) {
      for (auto& x : row) x = cell(gen);
    }
  }
  std::vector<std::vector<int>> clusters(tables.size()), labels(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) expand(tables[i], clusters[i], labels[i]);

  std::size_t mismatches = 0;
  const auto t0 = Clock::now();
  std::vector<int> got(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) got[i] = sort_deviation(clusters[i], labels[i]);
  const double elapsed = seconds_since(t0);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (got[i] != oracle::deviation_by_bijections(tables[i])) ++mismatches;
  }
  return {mismatches == 0 && elapsed < 1.0,
          "10000 tables, " + std::to_string(mismatches) + " mismatches, " + std::to_string(elapsed) + " s (limit 1 s)"};
}

Outcome deviation_bounds() {
  std::mt19937_64 gen(202);
  std::uniform_int_distribution<int> pick(0, 3);
  std::size_t failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<int> a(16), b(16);
    for (auto& x : a) x = pick(gen);
    for (auto& x : b) x = pick(gen);
    const int d = sort_deviation(a, b);
    if (d < 0 || d > 12) ++failures;
    if (sort_deviation(a, a) != 0) ++failures;
    std::array<int, 4> pa = {0, 1, 2, 3}, pb = {0, 1, 2, 3};
    std::shuffle(pa.begin(), pa.end(), gen);
    std::shuffle(pb.begin(), pb.end(), gen);
    std::vector<int> ra(16), rb(16);
    for (int i = 0; i < 16; ++i) {
      ra[i] = pa[a[i]] * 7 + 3;
      rb[i] = pb[b[i]] - 10;
    }
    if (sort_deviation(ra, rb) != d) ++failures;
  }
  return {failures == 0, "10000 pairs, " + std::to_string(failures) + " failures"};
}

Outcome synthetic_sorting() {
  const auto t0 = Clock::now();
  const auto sets = generate_sorting_sets(fixtures::lexicon(), 100, 303);
  const auto stimuli = flatten(sets);
  synthetic::ClusterSpec spec;
  spec.sigma = 1.0;
  spec.separation = 20.0;  // centers 20*sqrt(2) sigma apart
  spec.seed = 304;
  const auto by_cx = run_sorting_experiment(
      sets, synthetic::sentence_container(stimuli, synthetic::Key::construction, spec), {});
  spec.seed = 305;
  const auto by_verb = run_sorting_experiment(
      sets, synthetic::sentence_container(stimuli, synthetic::Key::verb, spec), {});
  const double elapsed = seconds_since(t0);
  const auto& a = by_cx.summary;
  const auto& b = by_verb.summary;
  const bool ok = a.mean_cdev == 0.0 && a.mean_vdev == 12.0 && b.mean_cdev == 12.0 && b.mean_vdev == 0.0 &&
                  elapsed < 10.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "construction-keyed CDev=%g VDev=%g; verb-keyed CDev=%g VDev=%g; %.2f s (limit 10 s)",
                a.mean_cdev, a.mean_vdev, b.mean_cdev, b.mean_vdev, elapsed);
  return {ok, buf};
}

Outcome clustering_oracle() {
  std::mt19937_64 gen(404);
  std::normal_distribution<double> n;
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::MatrixXd x(16, 8);
    for (Eigen::Index i = 0; i < 16; ++i) {
      for (Eigen::Index j = 0; j < 8; ++j) x(i, j) = n(gen);
    }
    if (!oracle::same_partition(cluster_agglomerative(x, 4), oracle::naive_ward(x, 4))) ++mismatches;
  }
  return {mismatches == 0, "1000 random 16x8 matrices, " + std::to_string(mismatches) + " mismatches"};
}

Outcome standardization() {
  std::mt19937_64 gen(505);
  double worst_mean = 0, worst_std = 0, worst_inverse = 0;
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {{2, 1}, {3, 5}, {50, 768}, {1000, 64}, {10000, 16}};
  for (const auto& [rows, dim] : shapes) {
    std::normal_distribution<double> n;
    EmbeddingMatrix m;
    m.manifest.dim = dim;
    m.manifest.count = rows;
    for (std::size_t r = 0; r < rows; ++r) m.manifest.items.push_back({"r" + std::to_string(r), r, 1, std::nullopt, {}, {}});
    m.data.resize(rows * dim);
    std::vector<double> scale(dim), offset(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      scale[d] = std::exp(n(gen));
      offset[d] = 5 * n(gen);
    }
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      m.data[i] = static_cast<float>(n(gen) * scale[i % dim] + offset[i % dim]);
    }
    const auto stats = compute_standardization_stats(m, "sample");
    const auto z = apply_standardization(m, stats);
    const auto o = oracle::two_pass(z.data, rows, dim);
    for (std::size_t d = 0; d < dim; ++d) {
      worst_mean = std::max(worst_mean, std::fabs(o.mean[d]));
      worst_std = std::max(worst_std, std::fabs(std::sqrt(o.var[d]) - 1.0));
    }
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      const std::size_t d = i % dim;
      worst_inverse = std::max(worst_inverse, std::fabs(z.data[i] * stats.std[d] + stats.mean[d] - m.data[i]));
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "max |mean|=%.2e (<1e-5), max |std-1|=%.2e (<1e-4), max inverse error=%.2e (<1e-5)",
                worst_mean, worst_std, worst_inverse);
  return {worst_mean < 1e-5 && worst_std < 1e-4 && worst_inverse < 1e-5, buf};
}

Outcome generation() {
  const auto& lex = fixtures::lexicon();
  const auto sets = generate_sorting_sets(lex, 1000, 606);
  std::size_t violations = 0, sentences = 0;
  for (const auto& s : sets) {
    violations += validate_set(s).size();
    sentences += s.grid.size();
  }
  const bool identical = write_jsonl(flatten(sets)) == write_jsonl(flatten(generate_sorting_sets(lex, 1000, 606)));

  const auto jabber = generate_jabberwocky(lex, 5000, 607);
  const auto& patterns = oracle::jabberwocky_patterns();
  std::size_t unmatched = 0;
  std::map<Construction, std::size_t> per;
  for (const auto& s : jabber) {
    ++per[s.construction];
    if (!std::regex_match(s.text, patterns.at(std::string(to_string(s.construction))))) ++unmatched;
  }
  bool balanced = per.size() == 4;
  for (const auto& [c, n] : per) balanced = balanced && n == 5000;
  const bool ok = sets.size() == 1000 && sentences == 16000 && violations == 0 && identical &&
                  jabber.size() == 20000 && balanced && unmatched == 0;
  return {ok, std::to_string(sentences) + " sorting sentences, " + std::to_string(violations) + " violations, " +
                  (identical ? "byte-identical" : "NOT identical") + " regeneration; " + std::to_string(jabber.size()) +
                  " Jabberwocky sentences, " + std::to_string(unmatched) + " template mismatches"};
}

Outcome statistics_oracle() {
  std::mt19937_64 gen(707);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> effect(0.0, 0.35);
  double worst = 0.0;
  for (int dataset = 0; dataset < 20; ++dataset) {
    std::vector<double> a(100), b(100);
    const double shift = effect(gen);
    for (std::size_t i = 0; i < a.size(); ++i) {
      b[i] = n(gen);
      a[i] = b[i] + shift + n(gen);
    }
    const double p = paired_compare(a, b).p_value;
    const double perm = oracle::sign_flip_p(a, b, 1000000, 708 + dataset);
    worst = std::max(worst, std::fabs(p - perm));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "20 datasets, max |p - p_perm| = %.4f (limit 0.01, 1e6 draws)", worst);
  return {worst < 0.01, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"assignment-oracle", assignment_oracle},
      {"deviation-bounds-identities", deviation_bounds},
      {"synthetic-sorting-fixture", synthetic_sorting},
      {"clustering-oracle", clustering_oracle},
      {"standardization", standardization},
      {"generation-constraints", generation},
      {"statistics-oracle", statistics_oracle},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
