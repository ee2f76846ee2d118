#include "contrastgen/grounding.hpp"

#include "contrastgen/error.hpp"
#include "contrastgen/text.hpp"

namespace contrastgen {

Grounding ground(std::string_view phrase, const SceneGraph& graph, const Lexicon& lex) {
  if (text::normalize(phrase).empty()) throw PreconditionViolation("ground: empty phrase");
  Grounding g;
  g.phrase = std::string(phrase);

  const auto core = core_noun_phrase(phrase);
  if (core.empty()) return g;
  std::vector<std::string> targets{core};
  if (auto head = head_noun(core); head != core) targets.push_back(head);

  for (const auto& target : targets) {
    MatchKind best = MatchKind::None;
    std::vector<ObjectId> ids;
    for (const auto& [id, obj] : graph.objects) {
      auto kind = same_term(target, obj.name, lex);
      if (kind == MatchKind::None) continue;
      if (kind < best) {
        best = kind;
        ids.clear();
      }
      if (kind == best) ids.push_back(id);
    }
    if (best != MatchKind::None) {
      g.kind = best;
      g.object_ids = std::move(ids);
      return g;
    }
  }
  return g;
}

bool is_present(std::string_view phrase, const SceneGraph& graph, const Lexicon& lex) {
  return !ground(phrase, graph, lex).object_ids.empty();
}

}  // namespace contrastgen
