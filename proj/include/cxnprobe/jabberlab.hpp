#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cxnprobe/construction.hpp"
#include "cxnprobe/embedstore.hpp"
#include "cxnprobe/error.hpp"
#include "cxnprobe/parallel.hpp"
#include "cxnprobe/stats.hpp"
#include "cxnprobe/stimulus.hpp"

namespace cxnprobe {

enum class FrequencyTier { high, low };

inline std::string_view to_string(FrequencyTier t) {
  return t == FrequencyTier::high ? "high-frequency" : "low-frequency";
}

inline FrequencyTier parse_tier(std::string_view s) {
  if (s == "high" || s == "high-frequency") return FrequencyTier::high;
  if (s == "low" || s == "low-frequency") return FrequencyTier::low;
  throw Error(Errc::argument, "unknown frequency tier '" + std::string(s) + "'");
}

struct PrototypeVerb {
  std::string lemma;  // past-tense surface form
  Construction construction = Construction::ditransitive;
  FrequencyTier tier = FrequencyTier::high;
  std::vector<double> embedding;
  std::size_t occurrence_count = 0;
};

struct PrototypeSpec {
  std::string_view lemma;
  Construction construction;
};

// Prototype verbs per tier, in Jabberwocky row order.
inline std::array<PrototypeSpec, 4> prototype_lemmas(FrequencyTier tier) {
  using C = Construction;
  if (tier == FrequencyTier::high) {
    return {{{"gave", C::ditransitive}, {"made", C::resultative},
             {"put", C::caused_motion}, {"took", C::removal}}};
  }
  return {{{"handed", C::ditransitive}, {"turned", C::resultative},
           {"placed", C::caused_motion}, {"removed", C::removal}}};
}

struct PrototypeEmbedding {
  std::vector<double> embedding;
  std::size_t occurrence_count = 0;
};

// Mean of the tracked first-subword vectors of every corpus item labelled
// with `lemma` (exact, case-sensitive match).
inline PrototypeEmbedding build_prototype(const EmbeddingMatrix& corpus, std::string_view lemma) {
  PrototypeEmbedding out;
  out.embedding.assign(corpus.manifest.dim, 0.0);
  for (const auto& item : corpus.manifest.items) {
    if (item.label != lemma) continue;
    if (!item.target_span) {
      throw Error(Errc::validation, "corpus item '" + item.item_id + "' for '" +
                                        std::string(lemma) + "' has no target_span");
    }
    auto v = corpus.row(item.row_start + *item.target_span);
    for (std::size_t d = 0; d < v.size(); ++d) out.embedding[d] += v[d];
    ++out.occurrence_count;
  }
  if (out.occurrence_count == 0) {
    throw Error(Errc::missing_prototype,
                "no occurrences of prototype verb '" + std::string(lemma) + "' in corpus container");
  }
  for (auto& x : out.embedding) x /= static_cast<double>(out.occurrence_count);
  return out;
}

inline std::vector<PrototypeVerb> build_prototypes(const EmbeddingMatrix& corpus, FrequencyTier tier) {
  std::vector<PrototypeVerb> out;
  for (const auto& spec : prototype_lemmas(tier)) {
    auto p = build_prototype(corpus, spec.lemma);
    out.push_back({std::string(spec.lemma), spec.construction, tier, std::move(p.embedding),
                   p.occurrence_count});
  }
  return out;
}

struct GridCell {
  double mean_distance = 0.0;
  Interval ci95;
  std::size_t n = 0;
};

struct PrototypeColumn {
  std::string lemma;
  Construction construction;
};

struct SentenceDistances {
  std::string item_id;
  Construction construction;
  std::vector<double> distances;  // one per grid column
};

// rows = sentence construction, columns = prototype verb.
struct DistanceGrid {
  FrequencyTier tier = FrequencyTier::high;
  std::vector<Construction> rows;
  std::vector<PrototypeColumn> columns;
  std::vector<std::vector<GridCell>> cells;
  std::vector<SentenceDistances> sentences;  // sorted by item_id
};

inline double euclidean(std::span<const float> a, std::span<const double> b) {
  double ss = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = static_cast<double>(a[d]) - b[d];
    ss += diff * diff;
  }
  return std::sqrt(ss);
}

// Aggregates per-sentence distances into the construction x prototype grid.
inline void fill_cells(DistanceGrid& grid) {
  const std::size_t nr = grid.rows.size(), nc = grid.columns.size();
  grid.cells.assign(nr, std::vector<GridCell>(nc));
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<double> xs;
      for (const auto& s : grid.sentences) {
        if (s.construction == grid.rows[r]) xs.push_back(s.distances[c]);
      }
      if (xs.empty()) {
        throw Error(Errc::validation, "no Jabberwocky sentences for " +
                                          std::string(to_string(grid.rows[r])));
      }
      grid.cells[r][c] = {mean_of(xs), ci95(xs), xs.size()};
    }
  }
}

inline DistanceGrid verb_distances(const EmbeddingMatrix& jabber,
                                   const std::vector<Stimulus>& stimuli,
                                   const std::vector<PrototypeVerb>& prototypes,
                                   std::size_t jobs = 1) {
  const std::size_t dim = jabber.manifest.dim;
  DistanceGrid grid;
  grid.rows.assign(kJabberwockyConstructions.begin(), kJabberwockyConstructions.end());
  if (prototypes.size() != grid.rows.size()) {
    throw Error(Errc::argument, "expected 4 prototype verbs, got " + std::to_string(prototypes.size()));
  }
  for (auto c : grid.rows) {
    auto n = std::count_if(prototypes.begin(), prototypes.end(),
                           [c](const PrototypeVerb& p) { return p.construction == c; });
    if (n != 1) {
      throw Error(Errc::argument, "need exactly one prototype for " + std::string(to_string(c)));
    }
  }
  for (const auto& p : prototypes) {
    if (p.embedding.size() != dim) {
      throw Error(Errc::argument, "prototype '" + p.lemma + "' dim differs from container dim");
    }
    grid.columns.push_back({p.lemma, p.construction});
    grid.tier = p.tier;
  }

  const auto index = jabber.item_index();
  std::vector<std::string> missing, untracked;
  for (const auto& s : stimuli) {
    if (std::find(grid.rows.begin(), grid.rows.end(), s.construction) == grid.rows.end()) {
      throw Error(Errc::validation, "stimulus " + s.item_id + " is not a Jabberwocky construction");
    }
    auto it = index.find(s.item_id);
    if (it == index.end()) {
      missing.push_back(s.item_id);
    } else if (!jabber.manifest.items[it->second].target_span) {
      untracked.push_back(s.item_id);
    }
  }
  auto listing = [](const std::vector<std::string>& ids) {
    std::string msg;
    for (std::size_t i = 0; i < ids.size() && i < 20; ++i) msg += " " + ids[i];
    if (ids.size() > 20) msg += " ...";
    return msg;
  };
  if (!missing.empty()) {
    throw Error(Errc::missing_item, std::to_string(missing.size()) +
                                        " stimuli have no embedding:" + listing(missing));
  }
  if (!untracked.empty()) {
    throw Error(Errc::validation, std::to_string(untracked.size()) +
                                      " stimuli lack a target_span:" + listing(untracked));
  }

  std::vector<const Stimulus*> order;
  for (const auto& s : stimuli) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const Stimulus* a, const Stimulus* b) { return a->item_id < b->item_id; });
  grid.sentences.resize(order.size());
  parallel_for(order.size(), jobs, [&](std::size_t i) {
    const Stimulus& s = *order[i];
    const auto& item = jabber.manifest.items[index.at(s.item_id)];
    auto verb = jabber.row(item.row_start + *item.target_span);
    SentenceDistances sd{s.item_id, s.construction, {}};
    for (const auto& p : prototypes) sd.distances.push_back(euclidean(verb, p.embedding));
    grid.sentences[i] = std::move(sd);
  });
  fill_cells(grid);
  return grid;
}

enum class IncongruentScore { mean, min };

inline std::string_view to_string(IncongruentScore s) {
  return s == IncongruentScore::mean ? "mean" : "min";
}

inline IncongruentScore parse_incongruent_score(std::string_view s) {
  if (s == "mean") return IncongruentScore::mean;
  if (s == "min") return IncongruentScore::min;
  throw Error(Errc::argument, "incongruent score must be 'mean' or 'min'");
}

struct CongruencyResult {
  double mean_congruent = 0.0;
  double mean_incongruent = 0.0;
  PairedComparison paired_test;
  // Per grid row: rank of the congruent prototype among the columns by cell
  // mean, 1 = smallest. Ties share the better rank.
  std::vector<int> per_construction_ranks;
  IncongruentScore incongruent_score = IncongruentScore::mean;
};

inline CongruencyResult congruency_analysis(const DistanceGrid& grid,
                                            IncongruentScore score = IncongruentScore::mean) {
  auto congruent_column = [&](Construction c) {
    for (std::size_t j = 0; j < grid.columns.size(); ++j) {
      if (grid.columns[j].construction == c) return j;
    }
    throw Error(Errc::validation, "no congruent prototype for " + std::string(to_string(c)));
  };
  if (grid.cells.size() != grid.rows.size()) throw Error(Errc::validation, "incomplete distance grid");

  CongruencyResult out;
  out.incongruent_score = score;
  std::vector<double> congruent, incongruent_scores;
  double incongruent_sum = 0.0;
  std::size_t incongruent_n = 0;
  for (const auto& s : grid.sentences) {
    const std::size_t cj = congruent_column(s.construction);
    congruent.push_back(s.distances[cj]);
    double acc = 0.0, lo = std::numeric_limits<double>::infinity();
    std::size_t m = 0;
    for (std::size_t j = 0; j < s.distances.size(); ++j) {
      if (j == cj) continue;
      acc += s.distances[j];
      lo = std::min(lo, s.distances[j]);
      ++m;
    }
    incongruent_sum += acc;
    incongruent_n += m;
    incongruent_scores.push_back(score == IncongruentScore::mean ? acc / static_cast<double>(m) : lo);
  }
  if (congruent.size() < 2) throw Error(Errc::validation, "congruency analysis needs at least 2 sentences");
  out.mean_congruent = mean_of(congruent);
  out.mean_incongruent = incongruent_sum / static_cast<double>(incongruent_n);
  out.paired_test = paired_compare(congruent, incongruent_scores);

  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    const std::size_t cj = congruent_column(grid.rows[r]);
    const double target = grid.cells[r][cj].mean_distance;
    int rank = 1;
    for (std::size_t j = 0; j < grid.columns.size(); ++j) {
      if (j != cj && grid.cells[r][j].mean_distance < target) ++rank;
    }
    out.per_construction_ranks.push_back(rank);
  }
  return out;
}

}  // namespace cxnprobe
