#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace contrastgen {

// Word knowledge shared by grounding and surface repair. All terms are stored
// normalized (lowercase, single spaces).
struct Lexicon {
  template <class V>
  using Map = std::map<std::string, V, std::less<>>;
  using Set = std::set<std::string, std::less<>>;

  Map<Set> synonyms;                   // symmetric
  Map<std::string> hypernyms;          // term -> broader term
  Map<std::string> plural_of;          // singular -> plural
  Map<std::string> singular_of;        // plural -> singular
  Set uncountable;
  Set colors;
  Map<std::string> article_overrides;  // first word -> "a" | "an"

  // Singular form of a single term, or the term itself when unknown. The view
  // refers to `term` or to lexicon storage.
  std::string_view singular(std::string_view term) const;
  bool is_plural_term(std::string_view term) const;
  bool is_uncountable_term(std::string_view term) const;
  bool are_synonyms(std::string_view a, std::string_view b) const;
  // True if `broader` is reachable from `term` through one or more hypernym hops.
  bool is_hyponym_of(std::string_view term, std::string_view broader) const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

// Ordered strongest first; comparisons on the enum follow precedence.
enum class MatchKind { Exact, Number, Synonym, Hyponym, None };

std::string to_string(MatchKind kind);

Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon(std::string_view json_text);
std::string serialize_lexicon(const Lexicon& lex);

// The compiled-in lexicon shipped in data/default_lexicon.json.
const Lexicon& default_lexicon();

// `question_term` is the phrase from the question, `graph_term` an object name.
// The hyponym case fires when the graph term is narrower ("animal" vs "dog").
MatchKind same_term(std::string_view question_term, std::string_view graph_term, const Lexicon& lex);

// Strips leading determiners and any trailing relative clause or prepositional
// modifier: "the bat the batter is holding" -> "bat",
// "teddy bear to the right of the pillow" -> "teddy bear".
std::string core_noun_phrase(std::string_view phrase);

// Last token of core_noun_phrase.
std::string head_noun(std::string_view phrase);

bool is_plural_phrase(std::string_view phrase, const Lexicon& lex);

// "a", "an" or "" for a noun phrase. Throws PreconditionViolation on empty input.
std::string indefinite_article(std::string_view noun_phrase, const Lexicon& lex);

}  // namespace contrastgen
