#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cxnprobe/construction.hpp"
#include "cxnprobe/error.hpp"
#include "cxnprobe/io.hpp"
#include "cxnprobe/stimulus.hpp"

namespace cxnprobe {

// Permissible fills for one (verb, construction) pair. Which lists are
// required depends on the construction's template.
struct SlotInventory {
  std::vector<std::string> objects;
  std::vector<std::string> paths;        // caused-motion
  std::vector<std::string> complements;  // resultative
};

struct VerbEntry {
  std::string lemma;
  std::string past;
  std::map<Construction, SlotInventory> constructions;

  bool compatible_with(Construction c) const { return constructions.count(c) != 0; }
};

struct PoolWord {
  std::string word;
  std::optional<long long> count;
};

struct JabberwockyPools {
  std::string source_id;
  // "counted": every entry carries a corpus count; "curated": hand-picked
  // list without counts.
  std::string count_basis = "counted";
  long long min_count = 10;
  std::vector<PoolWord> singular_nouns;
  std::vector<PoolWord> past_tense_verbs;
  std::vector<PoolWord> adjectives;
  std::size_t dropped_below_floor = 0;
};

struct Lexicon {
  std::vector<VerbEntry> verbs;
  std::vector<std::string> names;
  JabberwockyPools jabberwocky_pools;

  const VerbEntry* find_verb(const std::string& lemma) const {
    for (const auto& v : verbs) {
      if (v.lemma == lemma) return &v;
    }
    return nullptr;
  }
};

// The ten sorting verbs compatible with all four English constructions.
inline const std::vector<std::string>& sorting_verb_pool() {
  static const std::vector<std::string> pool = {"cut",   "hit",  "get",   "kick",  "pull",
                                                "punch", "push", "slice", "tear", "throw"};
  return pool;
}

namespace detail {

inline std::vector<PoolWord> parse_pool_list(const nlohmann::json& arr, const std::string& name,
                                             JabberwockyPools& pools) {
  std::vector<PoolWord> out;
  for (const auto& entry : arr) {
    PoolWord w;
    if (entry.is_string()) {
      w.word = entry.get<std::string>();
    } else {
      w.word = entry.at("word").get<std::string>();
      if (auto it = entry.find("count"); it != entry.end() && !it->is_null()) {
        w.count = it->get<long long>();
      }
    }
    if (w.word.empty()) throw Error(Errc::validation, "empty word in pool '" + name + "'");
    if (!w.count && pools.count_basis != "curated") {
      throw Error(Errc::validation,
                  "pool '" + name + "' entry '" + w.word + "' lacks a count");
    }
    if (w.count && *w.count < pools.min_count) {
      ++pools.dropped_below_floor;
      continue;
    }
    out.push_back(std::move(w));
  }
  return out;
}

inline JabberwockyPools parse_pools(const nlohmann::json& j) {
  JabberwockyPools pools;
  pools.source_id = j.value("source_id", "");
  pools.count_basis = j.value("count_basis", "counted");
  pools.min_count = j.value("min_count", 10LL);
  pools.singular_nouns = parse_pool_list(j.at("singular_nouns"), "singular_nouns", pools);
  pools.past_tense_verbs = parse_pool_list(j.at("past_tense_verbs"), "past_tense_verbs", pools);
  pools.adjectives = parse_pool_list(j.at("adjectives"), "adjectives", pools);
  return pools;
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
  if (auto it = j.find(key); it != j.end()) return it->get<std::vector<std::string>>();
  return {};
}

}  // namespace detail

// Parses a "lexicon/1" document. jabberwocky_pools may be inline or a path
// (relative to base_dir) to a "wordpool/1" file.
inline Lexicon lexicon_from_json(const nlohmann::json& j,
                                 const std::filesystem::path& base_dir = {}) {
  if (j.value("schema", "") != "lexicon/1") {
    throw Error(Errc::validation, "lexicon schema must be 'lexicon/1'");
  }
  Lexicon lex;
  try {
    lex.names = j.at("names").get<std::vector<std::string>>();
    for (const auto& jv : j.at("verbs")) {
      VerbEntry v;
      v.lemma = jv.at("lemma").get<std::string>();
      v.past = jv.at("past").get<std::string>();
      for (const auto& [cname, jc] : jv.at("constructions").items()) {
        SlotInventory inv;
        inv.objects = detail::string_list(jc, "objects");
        inv.paths = detail::string_list(jc, "paths");
        inv.complements = detail::string_list(jc, "complements");
        v.constructions[parse_construction(cname)] = std::move(inv);
      }
      lex.verbs.push_back(std::move(v));
    }
    if (auto it = j.find("jabberwocky_pools"); it != j.end() && !it->is_null()) {
      if (it->is_string()) {
        auto pool_path = base_dir / it->get<std::string>();
        auto pj = nlohmann::json::parse(io::read_file(pool_path));
        if (pj.value("schema", "") != "wordpool/1") {
          throw Error(Errc::validation, "word pool schema must be 'wordpool/1'");
        }
        lex.jabberwocky_pools = detail::parse_pools(pj);
      } else {
        lex.jabberwocky_pools = detail::parse_pools(*it);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::validation, std::string("malformed lexicon: ") + e.what());
  }
  return lex;
}

inline Lexicon load_lexicon(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::validation, "lexicon '" + path.string() + "': " + e.what());
  }
  return lexicon_from_json(j, path.parent_path());
}

// Slot lists a sorting-template construction needs to be filled.
inline std::vector<std::pair<const char*, const std::vector<std::string>*>> required_slots(
    Construction c, const SlotInventory& inv) {
  std::vector<std::pair<const char*, const std::vector<std::string>*>> out = {
      {"objects", &inv.objects}};
  if (c == Construction::caused_motion) out.emplace_back("paths", &inv.paths);
  if (c == Construction::resultative) out.emplace_back("complements", &inv.complements);
  return out;
}

// Throws Errc::validation naming the first verb/construction pair that
// cannot be filled.
inline void validate_sorting_lexicon(const Lexicon& lex) {
  for (const auto& lemma : sorting_verb_pool()) {
    const VerbEntry* v = lex.find_verb(lemma);
    if (!v) throw Error(Errc::validation, "lexicon lacks sorting verb '" + lemma + "'");
    if (v->past.empty()) throw Error(Errc::validation, "verb '" + lemma + "' has no past form");
    for (auto c : kSortingConstructions) {
      auto it = v->constructions.find(c);
      if (it == v->constructions.end()) {
        throw Error(Errc::validation, "verb '" + lemma + "' is not compatible with " +
                                          std::string(to_string(c)));
      }
      for (const auto& [slot, list] : required_slots(c, it->second)) {
        if (list->empty()) {
          throw Error(Errc::validation, "verb '" + lemma + "' has no permissible " + slot +
                                            " for " + std::string(to_string(c)));
        }
        for (const auto& fill : *list) {
          for (auto w : words_of(fill)) {
            if (w == v->past) {
              throw Error(Errc::validation, "fill '" + fill + "' for verb '" + lemma +
                                                "' repeats the verb form");
            }
          }
        }
      }
    }
  }
}

inline void validate_jabberwocky_pools(const JabberwockyPools& pools) {
  auto check = [&](const std::vector<PoolWord>& words, const char* name) {
    if (words.empty()) {
      throw Error(Errc::validation, std::string("jabberwocky pool '") + name + "' is empty");
    }
    for (const auto& w : words) {
      if (w.count && *w.count < pools.min_count) {
        throw Error(Errc::validation, std::string("pool '") + name + "' entry '" + w.word +
                                          "' is below the frequency floor");
      }
    }
  };
  check(pools.singular_nouns, "singular_nouns");
  check(pools.past_tense_verbs, "past_tense_verbs");
  check(pools.adjectives, "adjectives");
}

}  // namespace cxnprobe
