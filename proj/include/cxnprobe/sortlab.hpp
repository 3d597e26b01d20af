#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cxnprobe/assignment.hpp"
#include "cxnprobe/clustering.hpp"
#include "cxnprobe/embedstore.hpp"
#include "cxnprobe/error.hpp"
#include "cxnprobe/parallel.hpp"
#include "cxnprobe/pca.hpp"
#include "cxnprobe/stats.hpp"
#include "cxnprobe/stimulus.hpp"

namespace cxnprobe {

// Minimal number of items whose cluster must change for the clustering to
// coincide with the labelling: N minus the best label-to-cluster matching
// weight over the cluster x label contingency table.
template <typename ClusterId, typename Label>
int sort_deviation(std::span<const ClusterId> assignments, std::span<const Label> labels) {
  if (assignments.size() != labels.size()) {
    throw Error(Errc::argument, "assignments and labels differ in length");
  }
  std::map<ClusterId, std::size_t> cluster_idx;
  std::map<Label, std::size_t> label_idx;
  for (const auto& a : assignments) cluster_idx.emplace(a, 0);
  for (const auto& l : labels) label_idx.emplace(l, 0);
  std::size_t i = 0;
  for (auto& [id, idx] : cluster_idx) idx = i++;
  i = 0;
  for (auto& [id, idx] : label_idx) idx = i++;

  const std::size_t n = std::max(cluster_idx.size(), label_idx.size());
  if (n == 0) return 0;
  std::vector<std::vector<long long>> counts(n, std::vector<long long>(n, 0));
  for (std::size_t k = 0; k < assignments.size(); ++k) {
    ++counts[cluster_idx[assignments[k]]][label_idx[labels[k]]];
  }
  const auto best = max_weight_assignment(counts);
  return static_cast<int>(static_cast<long long>(assignments.size()) - best.total);
}

template <typename ClusterId, typename Label>
int sort_deviation(const std::vector<ClusterId>& assignments, const std::vector<Label>& labels) {
  return sort_deviation(std::span<const ClusterId>(assignments), std::span<const Label>(labels));
}

struct SortOutcome {
  std::string set_id;
  std::vector<int> assignments;  // grid order
  int construction_deviation = 0;
  int verb_deviation = 0;
  bool degenerate = false;  // fewer distinct vectors than clusters
};

struct ExperimentSummary {
  std::size_t n_sets = 0;
  double mean_cdev = 0.0;
  double mean_vdev = 0.0;
  Interval ci95_cdev;
  Interval ci95_vdev;
  std::optional<PairedComparison> paired_test;  // needs at least 2 sets
};

struct SortOptions {
  Linkage linkage = Linkage::ward;
  std::size_t jobs = 1;
};

struct SortResult {
  std::vector<SortOutcome> outcomes;
  ExperimentSummary summary;
};

// Row i holds the (pooled) embedding of set.grid[i].
inline Eigen::MatrixXd set_vectors(const StimulusSet& set, const EmbeddingMatrix& embeddings,
                                   const std::unordered_map<std::string, std::size_t>& index) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(set.grid.size()),
                    static_cast<Eigen::Index>(embeddings.manifest.dim));
  for (std::size_t i = 0; i < set.grid.size(); ++i) {
    const auto& item = embeddings.manifest.items.at(index.at(set.grid[i].item_id));
    const auto rows = pooled_rows(embeddings.manifest, item);
    if (rows.empty()) {
      throw Error(Errc::degenerate_item, "item '" + item.item_id + "' has no poolable rows");
    }
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
    for (auto r : rows) {
      auto v = embeddings.row(r);
      for (Eigen::Index d = 0; d < x.cols(); ++d) acc(d) += v[static_cast<std::size_t>(d)];
    }
    x.row(static_cast<Eigen::Index>(i)) = acc / static_cast<double>(rows.size());
  }
  return x;
}

inline void require_items(const std::vector<StimulusSet>& sets,
                          const std::unordered_map<std::string, std::size_t>& index) {
  std::vector<std::string> missing;
  for (const auto& set : sets) {
    for (const auto& s : set.grid) {
      if (!index.count(s.item_id)) missing.push_back(s.item_id);
    }
  }
  if (missing.empty()) return;
  std::string msg = std::to_string(missing.size()) + " stimuli have no embedding:";
  for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
  if (missing.size() > 20) msg += " ...";
  throw Error(Errc::missing_item, msg);
}

inline SortOutcome score_set(const StimulusSet& set, const Eigen::MatrixXd& vectors,
                             Linkage linkage) {
  const std::size_t k = set.constructions.size();
  SortOutcome out;
  out.set_id = set.set_id;
  out.assignments = cluster_agglomerative(vectors, k, linkage);
  std::vector<Construction> cx;
  std::vector<std::string> verbs;
  for (const auto& s : set.grid) {
    cx.push_back(s.construction);
    verbs.push_back(s.verb);
  }
  out.construction_deviation = sort_deviation(out.assignments, cx);
  out.verb_deviation = sort_deviation(out.assignments, verbs);

  std::size_t distinct = 0;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    bool fresh = true;
    for (Eigen::Index j = 0; j < i && fresh; ++j) fresh = vectors.row(i) != vectors.row(j);
    distinct += fresh;
  }
  out.degenerate = distinct < k;
  return out;
}

inline ExperimentSummary summarize(const std::vector<SortOutcome>& outcomes) {
  ExperimentSummary s;
  s.n_sets = outcomes.size();
  if (outcomes.empty()) return s;
  std::vector<double> c, v;
  for (const auto& o : outcomes) {
    c.push_back(o.construction_deviation);
    v.push_back(o.verb_deviation);
  }
  s.mean_cdev = mean_of(c);
  s.mean_vdev = mean_of(v);
  s.ci95_cdev = ci95(c);
  s.ci95_vdev = ci95(v);
  if (outcomes.size() >= 2) s.paired_test = paired_compare(c, v);
  return s;
}

// Clusters each set's sentence embeddings into K groups and scores the
// partition against the construction and verb sorts.
inline SortResult run_sorting_experiment(const std::vector<StimulusSet>& sets,
                                         const EmbeddingMatrix& embeddings,
                                         const SortOptions& options = {}) {
  const auto index = embeddings.item_index();
  require_items(sets, index);
  SortResult result;
  result.outcomes.resize(sets.size());
  parallel_for(sets.size(), options.jobs, [&](std::size_t i) {
    result.outcomes[i] = score_set(sets[i], set_vectors(sets[i], embeddings, index), options.linkage);
  });
  result.summary = summarize(result.outcomes);
  return result;
}

struct PcaPoint {
  std::string set_id;
  std::string item_id;
  Construction construction;
  std::string verb;
  double pc1 = 0.0;
  double pc2 = 0.0;
};

struct SetProjection {
  std::vector<PcaPoint> points;
  std::vector<double> explained_variance_ratio;
  bool zero_variance_warning = false;
};

inline SetProjection project_set(const StimulusSet& set, const EmbeddingMatrix& embeddings,
                                 const std::unordered_map<std::string, std::size_t>& index) {
  const auto pca = pca_project(set_vectors(set, embeddings, index), 2);
  SetProjection out;
  out.explained_variance_ratio = pca.explained_variance_ratio;
  out.zero_variance_warning = pca.zero_variance_warning;
  for (std::size_t i = 0; i < set.grid.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out.points.push_back({set.set_id, set.grid[i].item_id, set.grid[i].construction,
                          set.grid[i].verb, pca.coordinates(r, 0), pca.coordinates(r, 1)});
  }
  return out;
}

}  // namespace cxnprobe
