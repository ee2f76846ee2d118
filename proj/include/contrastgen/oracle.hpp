#pragma once

#include <optional>
#include <string>

#include "contrastgen/error.hpp"
#include "contrastgen/lexicon.hpp"
#include "contrastgen/scene_graph.hpp"
#include "contrastgen/templates.hpp"

namespace contrastgen {

struct OracleAnswer {
  std::string value;  // "yes"/"no", "left"/"right", or a color
  bool confident = true;

  friend bool operator==(const OracleAnswer&, const OracleAnswer&) = default;
};

struct OracleOptions {
  // Use bounding-box centers when no relation edge decides an IsXRelY question.
  bool geometry_fallback = true;
};

// The graph cannot answer the question at all.
class Unanswerable : public Error {
 public:
  Unanswerable(std::string slot, const std::string& reason)
      : Error("unanswerable (" + slot + "): " + reason), slot_(std::move(slot)) {}
  const std::string& slot() const { return slot_; }

 private:
  std::string slot_;
};

// A slot the answer depends on grounds to no object.
class GroundingFailed : public Unanswerable {
 public:
  GroundingFailed(std::string slot, const std::string& phrase)
      : Unanswerable(std::move(slot), "'" + phrase + "' does not ground in the scene graph") {}
};

inline constexpr std::string_view kNearPredicate = "near";
std::string relation_predicate(std::string_view rel);  // "left" -> "to the left of"
std::string opposite_side(std::string_view side);      // "left" <-> "right"

// Throws PreconditionViolation when the match belongs to another image, and
// Unanswerable (GroundingFailed for missing objects) when the graph cannot decide.
OracleAnswer answer(const TemplateMatch& m, const SceneGraph& graph, const Lexicon& lex,
                    const OracleOptions& opts = {});

// Slot-level entry point; ignores image ids.
OracleAnswer answer_slots(TemplateKind kind, std::string_view x, const std::optional<std::string>& y,
                          const std::optional<std::string>& rel, const SceneGraph& graph, const Lexicon& lex,
                          const OracleOptions& opts = {});

// Non-throwing variant of answer_slots for candidate screening.
std::optional<OracleAnswer> try_answer_slots(TemplateKind kind, std::string_view x,
                                             const std::optional<std::string>& y,
                                             const std::optional<std::string>& rel, const SceneGraph& graph,
                                             const Lexicon& lex, const OracleOptions& opts = {});

}  // namespace contrastgen
