#include "contrastgen/templates.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <initializer_list>
#include <span>

#include "contrastgen/error.hpp"
#include "contrastgen/text.hpp"

namespace contrastgen {

std::string to_string(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::WhichSide: return "which_side";
    case TemplateKind::WhatColor: return "what_color";
    case TemplateKind::SeeXOrY: return "see_x_or_y";
    case TemplateKind::AnyXNearY: return "any_x_near_y";
    case TemplateKind::IsXRelYPerturbObject: return "is_x_rel_y_object";
    case TemplateKind::IsXRelYPerturbRel: return "is_x_rel_y_rel";
  }
  return "unknown";
}

std::optional<TemplateKind> parse_template_kind(std::string_view name) {
  const auto wanted = text::normalize(name);
  for (auto kind : kAllTemplateKinds) {
    if (to_string(kind) == wanted) return kind;
  }
  return std::nullopt;
}

std::string template_label(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::WhichSide: return "On which side is the X?";
    case TemplateKind::WhatColor: return "What color is the X?";
    case TemplateKind::SeeXOrY: return "Do you see X or Y?";
    case TemplateKind::AnyXNearY: return "Are there X near the Y?";
    case TemplateKind::IsXRelYPerturbObject: return "Is the X Rel the Y? (object)";
    case TemplateKind::IsXRelYPerturbRel: return "Is the X Rel the Y? (relation)";
  }
  return "unknown";
}

bool has_y_slot(TemplateKind kind) { return kind != TemplateKind::WhichSide && kind != TemplateKind::WhatColor; }

bool has_rel_slot(TemplateKind kind) {
  return kind == TemplateKind::IsXRelYPerturbObject || kind == TemplateKind::IsXRelYPerturbRel;
}

std::string to_string(Atom atom) {
  switch (atom) {
    case Atom::ObjectX: return "object_x";
    case Atom::ObjectY: return "object_y";
    case Atom::Relation: return "relation";
  }
  return "unknown";
}

namespace {

struct Token {
  std::string lower;
  std::size_t begin;
  std::size_t end;
};

class Tokens {
 public:
  explicit Tokens(std::string_view q) {
    std::size_t end = q.size();
    auto strip_space = [&] {
      while (end > 0 && std::isspace(static_cast<unsigned char>(q[end - 1]))) --end;
    };
    strip_space();
    if (end > 0 && q[end - 1] == '?') --end;
    strip_space();
    std::size_t i = 0;
    while (i < end) {
      while (i < end && std::isspace(static_cast<unsigned char>(q[i]))) ++i;
      if (i >= end) break;
      std::size_t j = i;
      while (j < end && !std::isspace(static_cast<unsigned char>(q[j]))) ++j;
      toks_.push_back({text::lower(q.substr(i, j - i)), i, j});
      i = j;
    }
  }

  std::size_t size() const { return toks_.size(); }

  bool is(std::size_t i, std::initializer_list<std::string_view> words) const {
    return is(i, std::span<const std::string_view>(words.begin(), words.size()));
  }
  bool is(std::size_t i, std::span<const std::string_view> words) const {
    if (i >= toks_.size()) return false;
    return std::find(words.begin(), words.end(), toks_[i].lower) != words.end();
  }

  // Index of the first token at or after `from` that equals `word`.
  std::optional<std::size_t> find(std::size_t from, std::string_view word) const {
    for (std::size_t i = from; i < toks_.size(); ++i) {
      if (toks_[i].lower == word) return i;
    }
    return std::nullopt;
  }

  Span span(std::size_t first, std::size_t last) const { return {toks_[first].begin, toks_[last - 1].end}; }
  Span token_span(std::size_t i) const { return {toks_[i].begin, toks_[i].end}; }
  Span empty_at(std::size_t i) const { return {toks_[i].begin, toks_[i].begin}; }

 private:
  std::vector<Token> toks_;
};

constexpr std::array<std::string_view, 2> kCopula = {"is", "are"};

struct Slots {
  Span x;
  Span det_x;
  std::optional<Span> y;
  std::optional<Span> det_y;
  std::optional<Span> rel;
  std::optional<Span> verb;
};

// Consumes an optional determiner at `i` if a slot word still follows it.
Span take_det(const Tokens& t, std::size_t& i, std::size_t limit, std::initializer_list<std::string_view> dets) {
  if (i + 1 < limit && t.is(i, dets)) return t.token_span(i++);
  return t.empty_at(i);
}

std::optional<Slots> match_which_side(const Tokens& t) {
  if (!(t.is(0, {"on"}) && t.is(1, {"which"}) && t.is(2, {"side"}))) return std::nullopt;
  std::size_t i = 3;
  if (t.is(i, {"of"}) && t.is(i + 1, {"the", "this"}) && t.is(i + 2, {"photo", "picture", "image"})) i += 3;
  if (!t.is(i, kCopula)) return std::nullopt;
  Slots s;
  s.verb = t.token_span(i++);
  s.det_x = take_det(t, i, t.size(), {"the", "a", "an"});
  if (i >= t.size()) return std::nullopt;
  s.x = t.span(i, t.size());
  return s;
}

std::optional<Slots> match_what_color(const Tokens& t) {
  const std::size_t n = t.size();
  if (t.is(0, {"what"}) && t.is(1, {"color", "colour"}) && t.is(2, kCopula)) {
    Slots s;
    s.verb = t.token_span(2);
    std::size_t i = 3;
    s.det_x = take_det(t, i, n, {"the", "a", "an"});
    if (i >= n) return std::nullopt;
    s.x = t.span(i, n);
    return s;
  }
  if (n >= 5 && t.is(0, {"the"}) && t.is(n - 3, {"has", "have"}) && t.is(n - 2, {"what"}) &&
      t.is(n - 1, {"color", "colour"})) {
    Slots s;
    s.det_x = t.token_span(0);
    s.verb = t.token_span(n - 3);
    s.x = t.span(1, n - 3);
    return s;
  }
  return std::nullopt;
}

const std::vector<std::vector<std::string_view>> kSeeSuffixes = {
    {"in", "this", "picture"}, {"in", "the", "picture"}, {"in", "this", "image"}, {"in", "the", "image"},
    {"in", "this", "photo"},   {"in", "the", "photo"},   {"there"},              {"here"},
};

std::optional<Slots> match_see_x_or_y(const Tokens& t) {
  if (!(t.is(0, {"do"}) && t.is(1, {"you"}) && t.is(2, {"see"}))) return std::nullopt;
  std::size_t i = 3;
  if (t.is(i, {"either"})) ++i;
  Slots s;
  s.det_x = take_det(t, i, t.size(), {"a", "an", "any", "the", "some"});
  auto or_pos = t.find(i + 1, "or");
  if (!or_pos) return std::nullopt;
  s.x = t.span(i, *or_pos);
  std::size_t j = *or_pos + 1;
  std::size_t end = t.size();
  for (const auto& suffix : kSeeSuffixes) {
    if (end < j + suffix.size() + 1) continue;
    bool hit = true;
    for (std::size_t k = 0; k < suffix.size(); ++k) hit = hit && t.is(end - suffix.size() + k, {suffix[k]});
    if (hit) {
      end -= suffix.size();
      break;
    }
  }
  s.det_y = take_det(t, j, end, {"a", "an", "any", "the", "some"});
  if (j >= end) return std::nullopt;
  s.y = t.span(j, end);
  return s;
}

std::optional<Slots> match_any_x_near_y(const Tokens& t) {
  if (!(t.is(0, kCopula) && t.is(1, {"there"}))) return std::nullopt;
  Slots s;
  s.verb = t.token_span(0);
  std::size_t i = 2;
  s.det_x = take_det(t, i, t.size(), {"a", "an", "any", "some"});
  auto near = t.find(i + 1, "near");
  if (!near) return std::nullopt;
  s.x = t.span(i, *near);
  std::size_t j = *near + 1;
  s.det_y = take_det(t, j, t.size(), {"the", "a", "an"});
  if (j >= t.size()) return std::nullopt;
  s.y = t.span(j, t.size());
  return s;
}

std::optional<Slots> match_is_x_rel_y(const Tokens& t) {
  if (!(t.is(0, kCopula) && t.is(1, {"the"}))) return std::nullopt;
  for (std::size_t k = 3; k + 3 < t.size(); ++k) {
    if (t.is(k, {"to"}) && t.is(k + 1, {"the"}) && t.is(k + 2, {"left", "right"}) && t.is(k + 3, {"of"})) {
      Slots s;
      s.verb = t.token_span(0);
      s.det_x = t.token_span(1);
      s.x = t.span(2, k);
      s.rel = t.token_span(k + 2);
      std::size_t j = k + 4;
      s.det_y = take_det(t, j, t.size(), {"the", "a", "an"});
      if (j >= t.size()) return std::nullopt;
      s.y = t.span(j, t.size());
      return s;
    }
  }
  return std::nullopt;
}

TemplateMatch make_match(TemplateKind kind, const Slots& s, const QAPair& q) {
  auto slice = [&](Span sp) { return q.question.substr(sp.begin, sp.size()); };
  TemplateMatch m;
  m.kind = kind;
  m.x = slice(s.x);
  m.span_x = s.x;
  m.det_x = s.det_x;
  m.verb = s.verb;
  if (s.y) {
    m.y = slice(*s.y);
    m.span_y = s.y;
    m.det_y = s.det_y;
  }
  if (s.rel) {
    m.rel = text::lower(slice(*s.rel));
    m.span_rel = s.rel;
  }
  m.original = q;
  return m;
}

std::string match_case(std::string_view original, std::string replacement) {
  if (!original.empty() && !replacement.empty() && std::isupper(static_cast<unsigned char>(original.front()))) {
    replacement.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement.front())));
  }
  return replacement;
}

std::string article_prefix(std::string_view phrase, const Lexicon& lex) {
  auto art = indefinite_article(phrase, lex);
  return art.empty() ? art : art + " ";
}

}  // namespace

std::vector<TemplateMatch> match_template(const QAPair& q) {
  Tokens t(q.question);
  std::vector<TemplateMatch> out;
  if (auto s = match_which_side(t)) {
    out.push_back(make_match(TemplateKind::WhichSide, *s, q));
  } else if (auto s = match_what_color(t)) {
    out.push_back(make_match(TemplateKind::WhatColor, *s, q));
  } else if (auto s = match_see_x_or_y(t)) {
    out.push_back(make_match(TemplateKind::SeeXOrY, *s, q));
  } else if (auto s = match_any_x_near_y(t)) {
    out.push_back(make_match(TemplateKind::AnyXNearY, *s, q));
  } else if (auto s = match_is_x_rel_y(t)) {
    out.push_back(make_match(TemplateKind::IsXRelYPerturbRel, *s, q));
    out.push_back(make_match(TemplateKind::IsXRelYPerturbObject, *s, q));
  }
  return out;
}

std::vector<TemplateMatch> match_template(std::string_view question) {
  QAPair q;
  q.question = std::string(question);
  return match_template(q);
}

std::string render(TemplateKind kind, std::string_view x, const std::optional<std::string>& y,
                   const std::optional<std::string>& rel, const Lexicon& lex) {
  if (text::trim(x).empty()) throw ArityMismatch("render: X slot is empty");
  if (has_y_slot(kind) != y.has_value()) {
    throw ArityMismatch("render: " + to_string(kind) + (y ? " takes no Y slot" : " requires a Y slot"));
  }
  if (has_rel_slot(kind) != rel.has_value()) {
    throw ArityMismatch("render: " + to_string(kind) + (rel ? " takes no Rel slot" : " requires a Rel slot"));
  }
  if (y && text::trim(*y).empty()) throw ArityMismatch("render: Y slot is empty");
  if (rel && *rel != "left" && *rel != "right") throw ArityMismatch("render: Rel must be \"left\" or \"right\"");

  const std::string xs(x);
  const bool plural = is_plural_phrase(xs, lex);
  const std::string copula = plural ? "are" : "is";
  switch (kind) {
    case TemplateKind::WhichSide:
      return "On which side " + copula + " the " + xs + "?";
    case TemplateKind::WhatColor:
      return "What color " + copula + " the " + xs + "?";
    case TemplateKind::SeeXOrY:
      return "Do you see " + article_prefix(xs, lex) + xs + " or " + article_prefix(*y, lex) + *y + "?";
    case TemplateKind::AnyXNearY:
      return (plural ? "Are" : "Is") + std::string(" there any ") + xs + " near the " + *y + "?";
    case TemplateKind::IsXRelYPerturbObject:
    case TemplateKind::IsXRelYPerturbRel:
      return (plural ? "Are" : "Is") + std::string(" the ") + xs + " to the " + *rel + " of the " + *y + "?";
  }
  throw ArityMismatch("render: unknown template kind");
}

std::string substitute_atom(const TemplateMatch& m, Atom atom, std::string_view replacement, const Lexicon& lex) {
  struct Edit {
    Span span;
    std::string text;
  };
  const std::string& q = m.original.question;
  const std::string repl(replacement);
  auto slice = [&](Span sp) { return std::string_view(q).substr(sp.begin, sp.size()); };
  std::vector<Edit> edits;

  // Indefinite articles are recomputed; "the", "any" and "some" stay as they are.
  auto repair_det = [&](Span det, Span slot, bool insert_when_bare) {
    if (det.empty()) {
      if (insert_when_bare) {
        auto prefix = article_prefix(repl, lex);
        if (!prefix.empty()) edits.push_back({Span{slot.begin, slot.begin}, prefix});
      }
      return;
    }
    auto word = text::lower(slice(det));
    if (word != "a" && word != "an") return;
    auto art = indefinite_article(repl, lex);
    if (art.empty()) {
      edits.push_back({Span{det.begin, slot.begin}, ""});
    } else {
      edits.push_back({det, match_case(slice(det), art)});
    }
  };

  switch (atom) {
    case Atom::ObjectX: {
      edits.push_back({m.span_x, repl});
      repair_det(m.det_x, m.span_x, m.kind == TemplateKind::SeeXOrY || m.kind == TemplateKind::AnyXNearY);
      if (m.verb) {
        const auto verb = text::lower(slice(*m.verb));
        const bool plural = is_plural_phrase(repl, lex);
        const bool copula = verb == "is" || verb == "are";
        std::string agreed = copula ? (plural ? "are" : "is") : (plural ? "have" : "has");
        edits.push_back({*m.verb, match_case(slice(*m.verb), agreed)});
      }
      break;
    }
    case Atom::ObjectY:
      if (!m.span_y) throw ArityMismatch("substitute_atom: " + to_string(m.kind) + " has no Y slot");
      edits.push_back({*m.span_y, repl});
      if (m.det_y) repair_det(*m.det_y, *m.span_y, m.kind == TemplateKind::SeeXOrY);
      break;
    case Atom::Relation:
      if (!m.span_rel) throw ArityMismatch("substitute_atom: " + to_string(m.kind) + " has no Rel slot");
      edits.push_back({*m.span_rel, repl});
      break;
  }

  std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    if (a.span.begin != b.span.begin) return a.span.begin > b.span.begin;
    return a.span.size() > b.span.size();
  });
  std::string out = q;
  for (const auto& e : edits) out.replace(e.span.begin, e.span.size(), e.text);
  return out;
}

}  // namespace contrastgen
