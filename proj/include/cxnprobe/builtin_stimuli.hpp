#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cxnprobe/construction.hpp"
#include "cxnprobe/error.hpp"
#include "cxnprobe/stimulus.hpp"

namespace cxnprobe {

namespace detail {

struct BuiltinCell {
  std::string_view text;
  // Alternating slot/value pairs; "verb" is the inflected form in text.
  std::array<std::string_view, 10> fills;
};

struct BuiltinGrid {
  std::string_view code;
  std::string_view language;
  std::array<std::string_view, 4> verbs;
  std::array<Construction, 4> constructions;
  std::array<BuiltinCell, 16> cells;  // row-major verb x construction
};

using C = Construction;

// Published sorting stimuli, transcribed verbatim (UTF-8).
inline constexpr std::array<BuiltinGrid, 4> kBuiltinGrids = {{
    {"en-bencini",
     "en",
     {"Throw", "Get", "Slice", "Take"},
     {C::transitive, C::ditransitive, C::caused_motion, C::resultative},
     {{
         {"Anita threw the hammer.", {"verb", "threw", "subject", "Anita", "object", "hammer"}},
         {"Chris threw Linda the pencil.",
          {"verb", "threw", "subject", "Chris", "recipient", "Linda", "object", "pencil"}},
         {"Pat threw the keys onto the roof.",
          {"verb", "threw", "subject", "Pat", "object", "keys", "path", "onto the roof"}},
         {"Lyn threw the box apart.",
          {"verb", "threw", "subject", "Lyn", "object", "box", "complement", "apart"}},
         {"Michelle got the book.", {"verb", "got", "subject", "Michelle", "object", "book"}},
         {"Beth got Liz an invitation.",
          {"verb", "got", "subject", "Beth", "recipient", "Liz", "object", "invitation"}},
         {"Laura got the ball into the net.",
          {"verb", "got", "subject", "Laura", "object", "ball", "path", "into the net"}},
         {"Dana got the mattress inflated.",
          {"verb", "got", "subject", "Dana", "object", "mattress", "complement", "inflated"}},
         {"Barbara sliced the bread.",
          {"verb", "sliced", "subject", "Barbara", "object", "bread"}},
         {"Jennifer sliced Terry an apple.",
          {"verb", "sliced", "subject", "Jennifer", "recipient", "Terry", "object", "apple"}},
         {"Meg sliced the ham onto the plate.",
          {"verb", "sliced", "subject", "Meg", "object", "ham", "path", "onto the plate"}},
         {"Nancy sliced the tire open.",
          {"verb", "sliced", "subject", "Nancy", "object", "tire", "complement", "open"}},
         {"Audrey took the watch.", {"verb", "took", "subject", "Audrey", "object", "watch"}},
         {"Paula took Sue a message.",
          {"verb", "took", "subject", "Paula", "recipient", "Sue", "object", "message"}},
         {"Kim took the rose into the house.",
          {"verb", "took", "subject", "Kim", "object", "rose", "path", "into the house"}},
         {"Rachel took the wall down.",
          {"verb", "took", "subject", "Rachel", "object", "wall", "complement", "down"}},
     }}},
    {"de",
     "de",
     {"Werfen", "Bringen", "Schneiden", "Nehmen"},
     {C::transitive, C::ditransitive, C::caused_motion, C::resultative},
     {{
         {"Anita warf den Hammer.", {"verb", "warf", "subject", "Anita"}},
         {"Berta warf Linda den Bleistift.",
          {"verb", "warf", "subject", "Berta", "recipient", "Linda"}},
         {"Erika warf den Schlüsselbund auf das Dach.", {"verb", "warf", "subject", "Erika"}},
         {"Laura warf die Kisten auseinander.", {"verb", "warf", "subject", "Laura"}},
         {"Michelle brachte das Buch.", {"verb", "brachte", "subject", "Michelle"}},
         {"Simone brachte Lydia eine Einladung.",
          {"verb", "brachte", "subject", "Simone", "recipient", "Lydia"}},
         {"Emma brachte den Ball ins Netz.", {"verb", "brachte", "subject", "Emma"}},
         {"Leonie brachte die Stühle zusammen.", {"verb", "brachte", "subject", "Leonie"}},
         {"Karolin schnitt das Brot.", {"verb", "schnitt", "subject", "Karolin"}},
         {"Luisa schnitt Paula einen Apfel.",
          {"verb", "schnitt", "subject", "Luisa", "recipient", "Paula"}},
         {"Jennifer schnitt die Wurst auf den Teller.", {"verb", "schnitt", "subject", "Jennifer"}},
         {"Doris schnitt den Reifen auf.", {"verb", "schnitt", "subject", "Doris"}},
         {"Maria nahm die Uhr.", {"verb", "nahm", "subject", "Maria"}},
         {"Sophia nahm Jasmin das Geld.",
          {"verb", "nahm", "subject", "Sophia", "recipient", "Jasmin"}},
         {"Helena nahm die Rosen in das Haus.", {"verb", "nahm", "subject", "Helena"}},
         {"Theresa nahm das Plakat herunter.", {"verb", "nahm", "subject", "Theresa"}},
     }}},
    {"it",
     "it",
     {"Dare", "Fare", "Mettere", "Portare"},
     {C::transitive, C::prepositional_dative, C::caused_motion, C::resultative},
     {{
         {"Lauda dà un esame.", {"verb", "dà", "subject", "Lauda"}},
         {"Carlo dà una mela a Maria.", {"verb", "dà", "subject", "Carlo", "recipient", "Maria"}},
         {"Luca dà una spinta a Franco.", {"verb", "dà", "subject", "Luca"}},
         {"Paolo dà una verniciata di verde alla porta.", {"verb", "dà", "subject", "Paolo"}},
         {"Mario fa una torta.", {"verb", "fa", "subject", "Mario"}},
         {"Luigi fa un piacere a Giovanna.",
          {"verb", "fa", "subject", "Luigi", "recipient", "Giovanna"}},
         {"Fabio fa entrare la macchina in garage.", {"verb", "fa", "subject", "Fabio"}},
         {"Stefano fa bruciare il sugo.", {"verb", "fa", "subject", "Stefano"}},
         {"Annalisa mette la giacca.", {"verb", "mette", "subject", "Annalisa"}},
         {"Riccardo mette il cappello al bambino.", {"verb", "mette", "subject", "Riccardo"}},
         {"Silvia mette la penna nel cassetto.", {"verb", "mette", "subject", "Silvia"}},
         {"Filippo mette la casa in ordine.", {"verb", "mette", "subject", "Filippo"}},
         {"Linda porta lo zaino.", {"verb", "porta", "subject", "Linda"}},
         {"Laura porta la pizza a Francesco.",
          {"verb", "porta", "subject", "Laura", "recipient", "Francesco"}},
         {"Michele porta il libro in biblioteca.", {"verb", "porta", "subject", "Michele"}},
         {"Irene porta l'esercizio a termine.", {"verb", "porta", "subject", "Irene"}},
     }}},
    {"es",
     "es",
     {"Romper", "Doblar", "Acabar", "Cortar"},
     {C::transitive, C::ditransitive, C::unplanned_reflexive, C::middle},
     {{
         {"Carlos rompió el cristal.", {"verb", "rompió", "subject", "Carlos"}},
         {"Alfonso le rompió las gafas a Pepe.",
          {"verb", "rompió", "subject", "Alfonso", "recipient", "Pepe"}},
         {"A Juan se le rompieron los pantalones.", {"verb", "rompieron", "experiencer", "Juan"}},
         {"La porcelana se rompe con facilidad.", {"verb", "rompe"}},
         {"Felipe dobló el periódico.", {"verb", "dobló", "subject", "Felipe"}},
         {"Pablo le dobló el brazo a Lucas.",
          {"verb", "dobló", "subject", "Pablo", "recipient", "Lucas"}},
         {"A Pedro se le dobló el tobillo.", {"verb", "dobló", "experiencer", "Pedro"}},
         {"El aluminio se dobla bien.", {"verb", "dobla"}},
         {"Leonardo acabó su tesis.", {"verb", "acabó", "subject", "Leonardo"}},
         {"Tomás le acabó la pasta de dientes a Santi.",
          {"verb", "acabó", "subject", "Tomás", "recipient", "Santi"}},
         {"A Luis se le acabaron los cigarrillos.", {"verb", "acabaron", "experiencer", "Luis"}},
         {"Las carreras de 10 km se acaban sin problemas.", {"verb", "acaban"}},
         {"Isidro cortó el pan.", {"verb", "cortó", "subject", "Isidro"}},
         {"Jorge le cortó el paso a Yago.",
          {"verb", "cortó", "subject", "Jorge", "recipient", "Yago"}},
         {"A Ignacio se le cortó la conexión.", {"verb", "cortó", "experiencer", "Ignacio"}},
         {"Esta tela se corta muy bien.", {"verb", "corta"}},
     }}},
}};

}  // namespace detail

inline std::vector<std::string> builtin_stimulus_codes() {
  std::vector<std::string> codes;
  for (const auto& g : detail::kBuiltinGrids) codes.emplace_back(g.code);
  return codes;
}

inline StimulusSet load_builtin_stimuli(std::string_view code) {
  for (const auto& g : detail::kBuiltinGrids) {
    if (g.code != code) continue;
    StimulusSet set;
    set.set_id = std::string(g.code);
    for (auto v : g.verbs) set.verbs.emplace_back(v);
    set.constructions.assign(g.constructions.begin(), g.constructions.end());
    for (std::size_t v = 0; v < 4; ++v) {
      for (std::size_t c = 0; c < 4; ++c) {
        const auto& cell = g.cells[v * 4 + c];
        Stimulus st;
        st.item_id = set.set_id + "-" + set.verbs[v] + "-" + std::string(to_string(g.constructions[c]));
        st.text = std::string(cell.text);
        st.construction = g.constructions[c];
        st.verb = set.verbs[v];
        st.language = std::string(g.language);
        for (std::size_t i = 0; i + 1 < cell.fills.size() && !cell.fills[i].empty(); i += 2) {
          st.slot_fills.emplace(std::string(cell.fills[i]), std::string(cell.fills[i + 1]));
        }
        set.grid.push_back(std::move(st));
      }
    }
    return set;
  }
  std::string available;
  for (const auto& c : builtin_stimulus_codes()) available += (available.empty() ? "" : ", ") + c;
  throw Error(Errc::argument,
              "unknown stimulus language '" + std::string(code) + "' (available: " + available + ")");
}

}  // namespace cxnprobe
