#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "cxnprobe/error.hpp"

namespace cxnprobe {

enum class Construction {
  transitive,
  ditransitive,
  caused_motion,
  resultative,
  prepositional_dative,
  unplanned_reflexive,
  middle,
  removal,
};

inline constexpr std::array<Construction, 8> kAllConstructions = {
    Construction::transitive,          Construction::ditransitive,
    Construction::caused_motion,       Construction::resultative,
    Construction::prepositional_dative, Construction::unplanned_reflexive,
    Construction::middle,              Construction::removal,
};

// Column order of the English sorting grid.
inline constexpr std::array<Construction, 4> kSortingConstructions = {
    Construction::transitive, Construction::ditransitive,
    Construction::caused_motion, Construction::resultative};

// Row order of the Jabberwocky grid; prototype tiers follow the same order.
inline constexpr std::array<Construction, 4> kJabberwockyConstructions = {
    Construction::ditransitive, Construction::resultative,
    Construction::caused_motion, Construction::removal};

inline constexpr std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::transitive: return "transitive";
    case Construction::ditransitive: return "ditransitive";
    case Construction::caused_motion: return "caused-motion";
    case Construction::resultative: return "resultative";
    case Construction::prepositional_dative: return "prepositional-dative";
    case Construction::unplanned_reflexive: return "unplanned-reflexive";
    case Construction::middle: return "middle";
    case Construction::removal: return "removal";
  }
  return "?";
}

inline std::optional<Construction> try_parse_construction(std::string_view s) {
  for (auto c : kAllConstructions) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

inline Construction parse_construction(std::string_view s) {
  if (auto c = try_parse_construction(s)) return *c;
  throw Error(Errc::validation, "unknown construction '" + std::string(s) + "'");
}

}  // namespace cxnprobe
