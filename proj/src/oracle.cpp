#include "contrastgen/oracle.hpp"

#include <algorithm>

#include "contrastgen/grounding.hpp"

namespace contrastgen {

std::string relation_predicate(std::string_view rel) { return "to the " + std::string(rel) + " of"; }

std::string opposite_side(std::string_view side) { return side == "left" ? "right" : "left"; }

namespace {

struct Outcome {
  std::optional<OracleAnswer> answer;
  std::string slot;
  std::string phrase;
  std::string reason;  // empty for grounding failures
};

Outcome ok(std::string value, bool confident) { return {OracleAnswer{std::move(value), confident}, {}, {}, {}}; }
Outcome no_grounding(std::string slot, std::string_view phrase) {
  return {std::nullopt, std::move(slot), std::string(phrase), {}};
}
Outcome unanswerable(std::string slot, std::string reason) { return {std::nullopt, std::move(slot), {}, std::move(reason)}; }

const char* yes_no(bool b) { return b ? "yes" : "no"; }

bool has_edge(const SceneGraph& g, const ObjectId& from, const ObjectId& to, std::string_view predicate) {
  const auto& rels = g.objects.at(from).relations;
  return std::any_of(rels.begin(), rels.end(),
                     [&](const SGRelation& r) { return r.target == to && r.predicate == predicate; });
}

bool near(const SceneGraph& g, const ObjectId& a, const ObjectId& b) {
  return a != b && (has_edge(g, a, b, kNearPredicate) || has_edge(g, b, a, kNearPredicate));
}

Outcome which_side(std::string_view x, const SceneGraph& g, const Lexicon& lex) {
  auto xs = ground(x, g, lex).object_ids;
  if (xs.empty()) return no_grounding("x", x);
  bool confident = true;
  int first_sign = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const long c2 = g.objects.at(xs[i]).center_x2();
    const int sign = c2 < g.width ? -1 : c2 > g.width ? 1 : 0;
    if (sign == 0) confident = false;
    if (i == 0) first_sign = sign;
    else if (sign != first_sign) confident = false;
  }
  return ok(first_sign < 0 ? "left" : "right", confident);
}

Outcome what_color(std::string_view x, const SceneGraph& g, const Lexicon& lex) {
  auto xs = ground(x, g, lex).object_ids;
  if (xs.empty()) return no_grounding("x", x);
  std::optional<std::string> value;
  bool confident = true;
  for (const auto& id : xs) {
    std::vector<std::string> colors;
    for (const auto& a : g.objects.at(id).attributes) {
      if (lex.colors.count(a)) colors.push_back(a);
    }
    if (colors.size() != 1) confident = false;
    if (colors.empty()) continue;
    if (!value) value = colors.front();
    else if (*value != colors.front() || colors.size() > 1) confident = false;
  }
  if (!value) return unanswerable("x", "no grounded object carries a color attribute");
  return ok(*value, confident);
}

Outcome see_x_or_y(std::string_view x, std::string_view y, const SceneGraph& g, const Lexicon& lex) {
  return ok(yes_no(is_present(x, g, lex) || is_present(y, g, lex)), true);
}

Outcome any_x_near_y(std::string_view x, std::string_view y, const SceneGraph& g, const Lexicon& lex) {
  auto ys = ground(y, g, lex).object_ids;
  if (ys.empty()) return no_grounding("y", y);
  auto xs = ground(x, g, lex).object_ids;
  size_t near_count = 0;
  for (const auto& yid : ys) {
    if (std::any_of(xs.begin(), xs.end(), [&](const ObjectId& xid) { return near(g, xid, yid); })) ++near_count;
  }
  if (near_count == ys.size()) return ok("yes", true);
  if (near_count > 0) return ok("yes", false);  // only some of the Y objects have X nearby
  // X exists somewhere but no "near" edge speaks about the pair.
  return ok("no", xs.empty());
}

Outcome is_x_rel_y(std::string_view x, std::string_view y, std::string_view rel, const SceneGraph& g,
                   const Lexicon& lex, const OracleOptions& opts) {
  auto xs = ground(x, g, lex).object_ids;
  if (xs.empty()) return no_grounding("x", x);
  auto ys = ground(y, g, lex).object_ids;
  if (ys.empty()) return no_grounding("y", y);

  const auto asked = relation_predicate(rel);
  const auto opposite = relation_predicate(opposite_side(rel));
  const bool want_left = rel == "left";

  std::optional<std::string> value;
  bool confident = true;
  for (const auto& xid : xs) {
    for (const auto& yid : ys) {
      if (xid == yid) continue;
      const bool edge_yes = has_edge(g, xid, yid, asked) || has_edge(g, yid, xid, opposite);
      const bool edge_no = has_edge(g, xid, yid, opposite) || has_edge(g, yid, xid, asked);
      const long cx = g.objects.at(xid).center_x2();
      const long cy = g.objects.at(yid).center_x2();
      std::optional<bool> geometry;
      if (opts.geometry_fallback && cx != cy) geometry = want_left ? cx < cy : cx > cy;

      bool verdict = false;
      bool pair_confident = true;
      if (edge_yes && edge_no) {
        verdict = geometry.value_or(false);
        pair_confident = false;
      } else if (edge_yes || edge_no) {
        verdict = edge_yes;
        pair_confident = !geometry || *geometry == verdict;
      } else if (geometry) {
        verdict = *geometry;
      } else {
        pair_confident = false;
      }
      if (!value) value = yes_no(verdict);
      else if (*value != yes_no(verdict)) confident = false;
      confident = confident && pair_confident;
    }
  }
  if (!value) return unanswerable("y", "X and Y denote the same object");
  return ok(*value, confident);
}

Outcome evaluate(TemplateKind kind, std::string_view x, const std::optional<std::string>& y,
                 const std::optional<std::string>& rel, const SceneGraph& g, const Lexicon& lex,
                 const OracleOptions& opts) {
  if (has_y_slot(kind) && !y) throw ArityMismatch("oracle: " + to_string(kind) + " requires a Y slot");
  if (has_rel_slot(kind) && !rel) throw ArityMismatch("oracle: " + to_string(kind) + " requires a Rel slot");
  switch (kind) {
    case TemplateKind::WhichSide: return which_side(x, g, lex);
    case TemplateKind::WhatColor: return what_color(x, g, lex);
    case TemplateKind::SeeXOrY: return see_x_or_y(x, *y, g, lex);
    case TemplateKind::AnyXNearY: return any_x_near_y(x, *y, g, lex);
    case TemplateKind::IsXRelYPerturbObject:
    case TemplateKind::IsXRelYPerturbRel: return is_x_rel_y(x, *y, *rel, g, lex, opts);
  }
  throw ArityMismatch("oracle: unknown template kind");
}

}  // namespace

OracleAnswer answer_slots(TemplateKind kind, std::string_view x, const std::optional<std::string>& y,
                          const std::optional<std::string>& rel, const SceneGraph& graph, const Lexicon& lex,
                          const OracleOptions& opts) {
  auto out = evaluate(kind, x, y, rel, graph, lex, opts);
  if (out.answer) return *out.answer;
  if (out.reason.empty()) throw GroundingFailed(out.slot, out.phrase);
  throw Unanswerable(out.slot, out.reason);
}

std::optional<OracleAnswer> try_answer_slots(TemplateKind kind, std::string_view x,
                                             const std::optional<std::string>& y,
                                             const std::optional<std::string>& rel, const SceneGraph& graph,
                                             const Lexicon& lex, const OracleOptions& opts) {
  return evaluate(kind, x, y, rel, graph, lex, opts).answer;
}

OracleAnswer answer(const TemplateMatch& m, const SceneGraph& graph, const Lexicon& lex, const OracleOptions& opts) {
  if (!m.original.image_id.empty() && m.original.image_id != graph.image_id) {
    throw PreconditionViolation("oracle: question for image '" + m.original.image_id + "' asked against graph '" +
                                graph.image_id + "'");
  }
  return answer_slots(m.kind, m.x, m.y, m.rel, graph, lex, opts);
}

}  // namespace contrastgen
