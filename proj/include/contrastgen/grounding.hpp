#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "contrastgen/lexicon.hpp"
#include "contrastgen/scene_graph.hpp"

namespace contrastgen {

struct Grounding {
  std::string phrase;
  std::vector<ObjectId> object_ids;  // ascending
  MatchKind kind = MatchKind::None;  // None iff object_ids is empty
};

// Links a question phrase to scene-graph objects. The whole core noun phrase is
// tried first ("teddy bear"), then its head noun alone; within each, the
// strongest match kind that hits any object wins. Throws PreconditionViolation
// for an empty phrase.
Grounding ground(std::string_view phrase, const SceneGraph& graph, const Lexicon& lex);

bool is_present(std::string_view phrase, const SceneGraph& graph, const Lexicon& lex);

}  // namespace contrastgen
