#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cxnprobe/construction.hpp"
#include "cxnprobe/embedstore.hpp"
#include "cxnprobe/error.hpp"
#include "cxnprobe/jabberlab.hpp"
#include "cxnprobe/rng.hpp"
#include "cxnprobe/stimulus.hpp"

// Synthetic embedding fixtures: Gaussian clusters around orthogonal centers.
// Centers sit on distinct axes at distance `separation` from the origin, so
// any two centers are separation * sqrt(2) apart.
namespace cxnprobe::synthetic {

enum class Key { construction, verb };

struct ClusterSpec {
  std::size_t dim = 32;
  double sigma = 1.0;
  double separation = 20.0;
  std::uint64_t seed = 0;
  std::string model_id = "synthetic";
};

namespace detail {

inline std::vector<float> noisy_center(std::size_t axis, const ClusterSpec& spec, Rng& rng) {
  if (axis >= spec.dim) throw Error(Errc::argument, "synthetic fixture needs dim > label count");
  std::vector<float> v(spec.dim);
  for (auto& x : v) x = static_cast<float>(spec.sigma * rng.normal());
  v[axis] += static_cast<float>(spec.separation);
  return v;
}

inline std::size_t construction_axis(Construction c) {
  return static_cast<std::size_t>(std::find(kAllConstructions.begin(), kAllConstructions.end(), c) -
                                  kAllConstructions.begin());
}

}  // namespace detail

// One sentence row per stimulus, clustered by construction or by verb.
inline EmbeddingMatrix sentence_container(const std::vector<Stimulus>& stimuli, Key key,
                                          const ClusterSpec& spec) {
  std::map<std::string, std::size_t> verb_axis;
  for (const auto& s : stimuli) verb_axis.emplace(s.verb, 0);
  std::size_t next = 0;
  for (auto& [verb, axis] : verb_axis) axis = next++;

  EmbeddingMatrix m;
  m.manifest.model_id = spec.model_id;
  m.manifest.layer_index = 0;
  m.manifest.dim = spec.dim;
  m.manifest.granularity = Granularity::sentence;
  Rng rng(spec.seed);
  for (const auto& s : stimuli) {
    const std::size_t axis = key == Key::construction ? detail::construction_axis(s.construction)
                                                      : verb_axis.at(s.verb);
    auto v = detail::noisy_center(axis, spec, rng);
    m.manifest.items.push_back({s.item_id, m.manifest.count, 1, std::nullopt, {}, {}});
    ++m.manifest.count;
    m.data.insert(m.data.end(), v.begin(), v.end());
  }
  return m;
}

// Token container for Jabberwocky stimuli: one row per word plus sequence
// markers at both ends. The verb row sits near its construction's center,
// other rows are noise.
inline EmbeddingMatrix jabberwocky_container(const std::vector<Stimulus>& stimuli,
                                             const ClusterSpec& spec) {
  EmbeddingMatrix m;
  m.manifest.model_id = spec.model_id;
  m.manifest.dim = spec.dim;
  m.manifest.granularity = Granularity::token;
  Rng rng(spec.seed);
  for (const auto& s : stimuli) {
    const auto words = words_of(s.text);
    const std::size_t rows = words.size() + 2;
    std::size_t verb_row = 2;
    if (s.verb_span) {
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (static_cast<std::size_t>(words[w].data() - s.text.data()) == s.verb_span->begin) {
          verb_row = w + 1;
        }
      }
    }
    m.manifest.items.push_back({s.item_id, m.manifest.count, rows, verb_row, {0, rows - 1}, {}});
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<float> v(spec.dim);
      if (r == verb_row) {
        v = detail::noisy_center(detail::construction_axis(s.construction), spec, rng);
      } else {
        for (auto& x : v) x = static_cast<float>(spec.sigma * rng.normal());
      }
      m.data.insert(m.data.end(), v.begin(), v.end());
    }
    m.manifest.count += rows;
  }
  return m;
}

// Corpus container of prototype occurrences for both tiers: `per_lemma`
// single-row items labelled with the lemma, near the lemma's construction
// center.
inline EmbeddingMatrix prototype_corpus(std::size_t per_lemma, const ClusterSpec& spec) {
  EmbeddingMatrix m;
  m.manifest.model_id = spec.model_id;
  m.manifest.dim = spec.dim;
  m.manifest.granularity = Granularity::token;
  Rng rng(spec.seed);
  for (auto tier : {FrequencyTier::high, FrequencyTier::low}) {
    for (const auto& p : prototype_lemmas(tier)) {
      for (std::size_t i = 0; i < per_lemma; ++i) {
        auto v = detail::noisy_center(detail::construction_axis(p.construction), spec, rng);
        m.manifest.items.push_back({std::string(p.lemma) + "#" + std::to_string(i),
                                    m.manifest.count, 1, 0, {}, std::string(p.lemma)});
        ++m.manifest.count;
        m.data.insert(m.data.end(), v.begin(), v.end());
      }
    }
  }
  return m;
}

}  // namespace cxnprobe::synthetic
