#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contrastgen/lexicon.hpp"
#include "contrastgen/scene_graph.hpp"

namespace contrastgen {

// The two IsXRelY kinds share one surface pattern; they differ only in which
// atom the perturbation step replaces.
enum class TemplateKind {
  WhichSide,
  WhatColor,
  SeeXOrY,
  AnyXNearY,
  IsXRelYPerturbObject,
  IsXRelYPerturbRel,
};

inline constexpr std::array kAllTemplateKinds = {
    TemplateKind::WhichSide,         TemplateKind::WhatColor,           TemplateKind::SeeXOrY,
    TemplateKind::AnyXNearY,         TemplateKind::IsXRelYPerturbObject, TemplateKind::IsXRelYPerturbRel,
};

// Stable identifiers used in files and on the command line ("which_side", ...).
std::string to_string(TemplateKind kind);
std::optional<TemplateKind> parse_template_kind(std::string_view name);
// Human-readable template, e.g. "On which side is the X?".
std::string template_label(TemplateKind kind);

bool has_y_slot(TemplateKind kind);
bool has_rel_slot(TemplateKind kind);

// Half-open byte range into the original question text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct TemplateMatch {
  TemplateKind kind = TemplateKind::WhichSide;
  std::string x;
  std::optional<std::string> y;
  std::optional<std::string> rel;  // "left" | "right"
  Span span_x;
  std::optional<Span> span_y;
  std::optional<Span> span_rel;

  // Anchors for surface repair. A determiner span is empty (and positioned at the
  // slot start) when the slot has no determiner. `verb` is the copula or "has"
  // agreeing in number with X, when the template has one.
  Span det_x;
  std::optional<Span> det_y;
  std::optional<Span> verb;

  QAPair original;
};

// Recognizes the six templates. IsXRelY questions produce two matches
// (PerturbRel first, then PerturbObject); everything else at most one.
std::vector<TemplateMatch> match_template(const QAPair& q);
std::vector<TemplateMatch> match_template(std::string_view question);

// Canonical question text for a slot tuple. Throws ArityMismatch when the
// optional slots do not fit the kind.
std::string render(TemplateKind kind, std::string_view x, const std::optional<std::string>& y,
                   const std::optional<std::string>& rel, const Lexicon& lex);

enum class Atom { ObjectX, ObjectY, Relation };

std::string to_string(Atom atom);

// Replaces one atom of a matched question and repairs the adjacent indefinite
// article and the verb agreeing with X. Definite articles and "any" are kept.
std::string substitute_atom(const TemplateMatch& m, Atom atom, std::string_view replacement, const Lexicon& lex);

}  // namespace contrastgen
