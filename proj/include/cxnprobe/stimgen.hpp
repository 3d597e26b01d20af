#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cxnprobe/construction.hpp"
#include "cxnprobe/error.hpp"
#include "cxnprobe/lexicon.hpp"
#include "cxnprobe/rng.hpp"
#include "cxnprobe/stimulus.hpp"

namespace cxnprobe {

inline constexpr std::size_t kGridSize = 4;
inline constexpr int kMaxSetAttempts = 1000;

namespace detail {

inline std::string zero_pad(std::uint64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*llu", width, static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace detail

// Renders one English sorting sentence from its slot fills.
inline std::string render_sorting_sentence(Construction c,
                                           const std::map<std::string, std::string>& f) {
  const auto& subject = f.at("subject");
  const auto& verb = f.at("verb");
  const auto& object = f.at("object");
  switch (c) {
    case Construction::transitive:
      return subject + " " + verb + " the " + object + ".";
    case Construction::ditransitive:
      return subject + " " + verb + " " + f.at("recipient") + " the " + object + ".";
    case Construction::caused_motion:
      return subject + " " + verb + " the " + object + " " + f.at("path") + ".";
    case Construction::resultative:
      return subject + " " + verb + " the " + object + " " + f.at("complement") + ".";
    default:
      throw Error(Errc::argument,
                  "no sorting template for " + std::string(to_string(c)));
  }
}

inline std::vector<StimulusSet> generate_sorting_sets(const Lexicon& lexicon,
                                                      std::size_t n_sets,
                                                      std::uint64_t seed) {
  if (n_sets == 0) throw Error(Errc::argument, "n_sets must be at least 1");
  validate_sorting_lexicon(lexicon);
  constexpr std::size_t k = kGridSize;
  const std::size_t names_needed = k * k + k;
  if (lexicon.names.size() < names_needed) {
    throw Error(Errc::validation, "lexicon needs at least " + std::to_string(names_needed) +
                                      " distinct names");
  }
  const auto& pool = sorting_verb_pool();

  std::vector<StimulusSet> sets;
  sets.reserve(n_sets);
  for (std::size_t s = 0; s < n_sets; ++s) {
    Rng rng(mix_seed(seed, s));
    StimulusSet set;
    set.set_id = "s" + detail::zero_pad(s, 5);
    set.constructions.assign(kSortingConstructions.begin(), kSortingConstructions.end());

    std::vector<const VerbEntry*> verbs;
    for (auto idx : rng.sample_without_replacement(pool.size(), k)) {
      verbs.push_back(lexicon.find_verb(pool[idx]));
      set.verbs.push_back(pool[idx]);
    }
    auto name_idx = rng.sample_without_replacement(lexicon.names.size(), names_needed);

    // fills[v][c]: slot -> value
    std::vector<std::vector<std::map<std::string, std::string>>> fills(
        k, std::vector<std::map<std::string, std::string>>(k));
    int attempts = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const Construction cx = set.constructions[c];
      for (;;) {
        if (++attempts > kMaxSetAttempts) {
          throw Error(Errc::validation,
                      "set " + set.set_id + ": no overlap-free fill for " +
                          std::string(to_string(cx)) + " after " +
                          std::to_string(kMaxSetAttempts) + " attempts");
        }
        std::set<std::string> seen;
        bool ok = true;
        for (std::size_t v = 0; v < k && ok; ++v) {
          const auto& inv = verbs[v]->constructions.at(cx);
          auto& f = fills[v][c];
          f.clear();
          f["object"] = inv.objects[rng.index(inv.objects.size())];
          if (cx == Construction::caused_motion) f["path"] = inv.paths[rng.index(inv.paths.size())];
          if (cx == Construction::resultative) {
            f["complement"] = inv.complements[rng.index(inv.complements.size())];
          }
          for (const auto& [slot, value] : f) ok = ok && seen.insert(value).second;
        }
        if (ok) break;
      }
    }

    for (std::size_t v = 0; v < k; ++v) {
      for (std::size_t c = 0; c < k; ++c) {
        const Construction cx = set.constructions[c];
        auto f = fills[v][c];
        f["subject"] = lexicon.names[name_idx[v * k + c]];
        if (cx == Construction::ditransitive) f["recipient"] = lexicon.names[name_idx[k * k + v]];
        f["verb"] = verbs[v]->past;
        Stimulus st;
        st.item_id = set.set_id + "-" + set.verbs[v] + "-" + std::string(to_string(cx));
        st.text = render_sorting_sentence(cx, f);
        st.construction = cx;
        st.verb = set.verbs[v];
        st.language = "en";
        st.slot_fills = std::move(f);
        st.seed_provenance = SeedProvenance{seed, s};
        set.grid.push_back(std::move(st));
      }
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

struct Violation {
  std::string invariant;
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // (verb row, construction column)
  std::vector<std::string> offending;
  std::string message;
};

// Checks every StimulusSet invariant; an empty result means the set is valid.
inline std::vector<Violation> validate_set(const StimulusSet& set) {
  std::vector<Violation> out;
  const std::size_t k = set.verbs.size();

  if (set.constructions.size() != k) {
    out.push_back({"square-grid", {}, {},
                   "set " + set.set_id + " has " + std::to_string(k) + " verbs but " +
                       std::to_string(set.constructions.size()) + " constructions"});
  }
  if (set.grid.size() != k * set.constructions.size()) {
    out.push_back({"grid-size", {}, {},
                   "set " + set.set_id + " has " + std::to_string(set.grid.size()) +
                       " stimuli, expected " + std::to_string(k * set.constructions.size())});
    return out;
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (set.verbs[a] == set.verbs[b]) {
        out.push_back({"distinct-verbs", {}, {set.verbs[a]}, "verb repeated in set " + set.set_id});
      }
    }
  }

  const std::size_t nc = set.constructions.size();
  for (std::size_t v = 0; v < k; ++v) {
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& st = set.cell(v, c);
      if (st.verb != set.verbs[v] || st.construction != set.constructions[c]) {
        out.push_back({"cell-labels", {{v, c}}, {st.item_id},
                       "stimulus " + st.item_id + " is labelled (" + st.verb + ", " +
                           std::string(to_string(st.construction)) + ")"});
      }
      if (auto it = st.slot_fills.find("verb"); it != st.slot_fills.end()) {
        auto words = words_of(st.text);
        auto n = std::count(words.begin(), words.end(), std::string_view(it->second));
        if (n != 1) {
          out.push_back({"verb-once", {{v, c}}, {it->second, st.text},
                         "verb form '" + it->second + "' occurs " + std::to_string(n) +
                             " times in '" + st.text + "'"});
        }
      }
    }
  }

  // No filler repeated within a construction column.
  for (std::size_t c = 0; c < nc; ++c) {
    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> where;
    for (std::size_t v = 0; v < k; ++v) {
      std::set<std::string> in_cell;
      for (const auto& [slot, value] : set.cell(v, c).slot_fills) {
        if (slot == "verb") continue;
        if (in_cell.insert(value).second) where[value].emplace_back(v, c);
      }
    }
    for (const auto& [value, cells] : where) {
      if (cells.size() > 1) {
        out.push_back({"construction-no-overlap", cells, {value},
                       "'" + value + "' repeated within " +
                           std::string(to_string(set.constructions[c])) + " sentences"});
      }
    }
  }

  // Names are not reused across different constructions of one set.
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> names;
  for (std::size_t v = 0; v < k; ++v) {
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& f = set.cell(v, c).slot_fills;
      for (const char* slot : {"subject", "recipient"}) {
        if (auto it = f.find(slot); it != f.end()) names[it->second].emplace_back(v, c);
      }
    }
  }
  for (const auto& [name, cells] : names) {
    std::set<std::size_t> columns;
    for (const auto& cell : cells) columns.insert(cell.second);
    if (columns.size() > 1) {
      out.push_back({"set-disjoint-names", cells, {name},
                     "name '" + name + "' used in several constructions of set " + set.set_id});
    }
  }
  return out;
}

// Jabberwocky templates, one per construction:
//   ditransitive   S/he V-ed him/her the N.
//   resultative    S/he V-ed it Adj.
//   caused-motion  S/he V-ed it on the N.
//   removal        S/he V-ed it from him/her.
struct JabberwockyFill {
  std::string subject;  // "He" | "She"
  std::string verb;
  std::string object;  // "him" | "her"; ditransitive and removal only
  std::string noun;
  std::string adjective;
};

// Returns the sentence and the byte span of the verb within it.
inline std::pair<std::string, TextSpan> render_jabberwocky(Construction c,
                                                           const JabberwockyFill& f) {
  std::string text = f.subject + " ";
  TextSpan span{text.size(), text.size() + f.verb.size()};
  text += f.verb;
  switch (c) {
    case Construction::ditransitive: text += " " + f.object + " the " + f.noun + "."; break;
    case Construction::resultative: text += " it " + f.adjective + "."; break;
    case Construction::caused_motion: text += " it on the " + f.noun + "."; break;
    case Construction::removal: text += " it from " + f.object + "."; break;
    default:
      throw Error(Errc::argument, "no Jabberwocky template for " + std::string(to_string(c)));
  }
  return {std::move(text), span};
}

inline std::vector<Stimulus> generate_jabberwocky(const Lexicon& lexicon,
                                                  std::size_t per_construction,
                                                  std::uint64_t seed) {
  if (per_construction == 0) throw Error(Errc::argument, "per_construction must be at least 1");
  const auto& pools = lexicon.jabberwocky_pools;
  validate_jabberwocky_pools(pools);

  std::vector<Stimulus> out;
  out.reserve(per_construction * kJabberwockyConstructions.size());
  std::uint64_t ordinal = 0;
  for (Construction c : kJabberwockyConstructions) {
    for (std::size_t i = 0; i < per_construction; ++i, ++ordinal) {
      Rng rng(mix_seed(seed, ordinal));
      JabberwockyFill f;
      f.subject = rng.coin() ? "She" : "He";
      f.verb = pools.past_tense_verbs[rng.index(pools.past_tense_verbs.size())].word;
      Stimulus st;
      st.slot_fills["subject"] = f.subject;
      st.slot_fills["verb"] = f.verb;
      switch (c) {
        case Construction::ditransitive:
          f.object = rng.coin() ? "her" : "him";
          f.noun = pools.singular_nouns[rng.index(pools.singular_nouns.size())].word;
          st.slot_fills["object"] = f.object;
          st.slot_fills["noun"] = f.noun;
          break;
        case Construction::resultative:
          f.adjective = pools.adjectives[rng.index(pools.adjectives.size())].word;
          st.slot_fills["adjective"] = f.adjective;
          break;
        case Construction::caused_motion:
          f.noun = pools.singular_nouns[rng.index(pools.singular_nouns.size())].word;
          st.slot_fills["noun"] = f.noun;
          break;
        case Construction::removal:
          f.object = rng.coin() ? "her" : "him";
          st.slot_fills["object"] = f.object;
          break;
        default:
          break;
      }
      auto [text, span] = render_jabberwocky(c, f);
      st.item_id = "jw-" + std::string(to_string(c)) + "-" + detail::zero_pad(i, 5);
      st.text = std::move(text);
      st.construction = c;
      st.verb = f.verb;
      st.language = "en";
      st.seed_provenance = SeedProvenance{seed, ordinal};
      st.verb_span = span;
      out.push_back(std::move(st));
    }
  }
  return out;
}

}  // namespace cxnprobe
