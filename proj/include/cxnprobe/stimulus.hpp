#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cxnprobe/construction.hpp"
#include "cxnprobe/error.hpp"

namespace cxnprobe {

using ordered_json = nlohmann::ordered_json;

struct SeedProvenance {
  std::uint64_t seed = 0;
  std::uint64_t draw = 0;
  friend bool operator==(const SeedProvenance&, const SeedProvenance&) = default;
};

// Half-open byte range [begin, end) into Stimulus::text.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

struct Stimulus {
  std::string item_id;
  std::string text;
  Construction construction = Construction::transitive;
  std::string verb;
  std::string language;
  // Slot name -> surface string. "verb" holds the inflected verb as it
  // appears in text.
  std::map<std::string, std::string> slot_fills;
  std::optional<SeedProvenance> seed_provenance;
  std::optional<TextSpan> verb_span;

  friend bool operator==(const Stimulus&, const Stimulus&) = default;
};

// K x K grid, stored row-major: grid[v * K + c] is verb v in construction c.
struct StimulusSet {
  std::string set_id;
  std::vector<Stimulus> grid;
  std::vector<std::string> verbs;
  std::vector<Construction> constructions;

  std::size_t k() const { return verbs.size(); }
  const Stimulus& cell(std::size_t verb, std::size_t construction) const {
    return grid.at(verb * constructions.size() + construction);
  }
};

inline ordered_json to_json(const Stimulus& s) {
  ordered_json j;
  j["item_id"] = s.item_id;
  j["text"] = s.text;
  j["construction"] = std::string(to_string(s.construction));
  j["verb"] = s.verb;
  j["language"] = s.language;
  ordered_json fills = ordered_json::object();
  for (const auto& [slot, value] : s.slot_fills) fills[slot] = value;
  j["slot_fills"] = std::move(fills);
  if (s.seed_provenance) {
    j["seed_provenance"] = {{"seed", s.seed_provenance->seed},
                            {"draw", s.seed_provenance->draw}};
  } else {
    j["seed_provenance"] = nullptr;
  }
  if (s.verb_span) j["verb_span"] = {s.verb_span->begin, s.verb_span->end};
  return j;
}

inline Stimulus stimulus_from_json(const nlohmann::json& j) {
  try {
    Stimulus s;
    s.item_id = j.at("item_id").get<std::string>();
    s.text = j.at("text").get<std::string>();
    s.construction = parse_construction(j.at("construction").get<std::string>());
    s.verb = j.at("verb").get<std::string>();
    s.language = j.at("language").get<std::string>();
    for (const auto& [slot, value] : j.at("slot_fills").items()) {
      s.slot_fills[slot] = value.get<std::string>();
    }
    if (auto it = j.find("seed_provenance"); it != j.end() && !it->is_null()) {
      s.seed_provenance = SeedProvenance{it->at("seed").get<std::uint64_t>(),
                                         it->at("draw").get<std::uint64_t>()};
    }
    if (auto it = j.find("verb_span"); it != j.end() && !it->is_null()) {
      TextSpan span{it->at(0).get<std::size_t>(), it->at(1).get<std::size_t>()};
      if (span.begin > span.end || span.end > s.text.size()) {
        throw Error(Errc::validation, "verb_span out of range for " + s.item_id);
      }
      s.verb_span = span;
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::validation, std::string("malformed stimulus record: ") + e.what());
  }
}

inline std::string write_jsonl(const std::vector<Stimulus>& stimuli) {
  std::string out;
  for (const auto& s : stimuli) {
    out += to_json(s).dump();
    out += '\n';
  }
  return out;
}

inline std::vector<Stimulus> read_jsonl(std::string_view text) {
  std::vector<Stimulus> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::validation,
                  "stimulus JSONL line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(stimulus_from_json(j));
  }
  return out;
}

// Set index: the grid layout of each set, referencing stimuli by item_id.
inline ordered_json sets_index_to_json(const std::vector<StimulusSet>& sets) {
  ordered_json root;
  root["schema"] = "stimsets/1";
  ordered_json arr = ordered_json::array();
  for (const auto& set : sets) {
    ordered_json js;
    js["set_id"] = set.set_id;
    js["verbs"] = set.verbs;
    ordered_json cx = ordered_json::array();
    for (auto c : set.constructions) cx.push_back(std::string(to_string(c)));
    js["constructions"] = std::move(cx);
    ordered_json items = ordered_json::array();
    for (const auto& s : set.grid) items.push_back(s.item_id);
    js["items"] = std::move(items);
    arr.push_back(std::move(js));
  }
  root["sets"] = std::move(arr);
  return root;
}

inline std::vector<StimulusSet> sets_from_index(const nlohmann::json& index,
                                                const std::vector<Stimulus>& stimuli) {
  if (index.value("schema", "") != "stimsets/1") {
    throw Error(Errc::validation, "set index schema must be 'stimsets/1'");
  }
  std::unordered_map<std::string, const Stimulus*> by_id;
  for (const auto& s : stimuli) by_id.emplace(s.item_id, &s);
  std::vector<StimulusSet> sets;
  try {
    for (const auto& js : index.at("sets")) {
      StimulusSet set;
      set.set_id = js.at("set_id").get<std::string>();
      set.verbs = js.at("verbs").get<std::vector<std::string>>();
      for (const auto& c : js.at("constructions")) {
        set.constructions.push_back(parse_construction(c.get<std::string>()));
      }
      for (const auto& id : js.at("items")) {
        auto it = by_id.find(id.get<std::string>());
        if (it == by_id.end()) {
          throw Error(Errc::validation, "set " + set.set_id + " references unknown item " +
                                            id.get<std::string>());
        }
        set.grid.push_back(*it->second);
      }
      sets.push_back(std::move(set));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::validation, std::string("malformed set index: ") + e.what());
  }
  return sets;
}

// Splits text into words on ASCII whitespace and strips trailing/leading
// ASCII punctuation. Multi-byte UTF-8 letters are kept intact.
inline std::vector<std::string_view> words_of(std::string_view text) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  auto is_punct = [](char c) {
    return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == '"';
  };
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    std::string_view w = text.substr(i, j - i);
    while (!w.empty() && is_punct(w.front())) w.remove_prefix(1);
    while (!w.empty() && is_punct(w.back())) w.remove_suffix(1);
    if (!w.empty()) words.push_back(w);
    i = j;
  }
  return words;
}

}  // namespace cxnprobe
