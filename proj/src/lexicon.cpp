#include "contrastgen/lexicon.hpp"

#include <array>
#include <sstream>

#include "contrastgen/error.hpp"
#include "contrastgen/text.hpp"
#include "json_util.hpp"

namespace contrastgen {

using detail::Json;

namespace {

constexpr std::array kLeadingDeterminers = {"a", "an", "the", "any", "some", "either"};

// A token from this list after the first word starts a modifier or clause.
constexpr std::array kClauseMarkers = {"the",    "a",     "an",     "that",  "which", "who",   "whose",
                                       "to",     "of",    "on",     "in",    "near",  "behind", "with",
                                       "at",     "under", "above",  "below", "beside", "by",    "next",
                                       "inside", "is",    "are",    "has",   "have",  "from",  "for"};

template <size_t N>
bool contains(const std::array<const char*, N>& words, std::string_view w) {
  for (const char* x : words) {
    if (w == x) return true;
  }
  return false;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

[[noreturn]] void schema_error(const std::string& msg) { throw Error("lexicon: " + msg); }

std::vector<std::string> string_array(const Json& j, const char* key) {
  std::vector<std::string> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_array()) schema_error(std::string(key) + " must be an array");
  for (const auto& v : *it) {
    if (!v.is_string()) schema_error(std::string(key) + " must contain strings");
    out.push_back(text::normalize(v.get<std::string>()));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> string_map(const Json& j, const char* key) {
  std::vector<std::pair<std::string, std::string>> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_object()) schema_error(std::string(key) + " must be an object");
  for (const auto& [k, v] : it->items()) {
    if (!v.is_string()) schema_error(std::string(key) + " values must be strings");
    out.emplace_back(text::normalize(k), text::normalize(v.get<std::string>()));
  }
  return out;
}

}  // namespace

std::string to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::Exact: return "exact";
    case MatchKind::Number: return "number";
    case MatchKind::Synonym: return "synonym";
    case MatchKind::Hyponym: return "hyponym";
    case MatchKind::None: return "none";
  }
  return "none";
}

std::string_view Lexicon::singular(std::string_view term) const {
  auto it = singular_of.find(term);
  return it == singular_of.end() ? term : std::string_view(it->second);
}

bool Lexicon::is_plural_term(std::string_view term) const {
  auto it = singular_of.find(term);
  // Invariant nouns ("sheep") are listed as their own plural; treat them as singular.
  return it != singular_of.end() && it->second != term;
}

bool Lexicon::is_uncountable_term(std::string_view term) const {
  return uncountable.contains(term) || uncountable.contains(singular(term));
}

bool Lexicon::are_synonyms(std::string_view a, std::string_view b) const {
  auto it = synonyms.find(a);
  return it != synonyms.end() && it->second.contains(b);
}

bool Lexicon::is_hyponym_of(std::string_view term, std::string_view broader) const {
  std::string_view cur = term;
  // A chain longer than the map has a cycle in it.
  for (std::size_t hops = 0; hops < hypernyms.size(); ++hops) {
    auto it = hypernyms.find(cur);
    if (it == hypernyms.end()) return false;
    cur = it->second;
    if (cur == broader) return true;
  }
  return false;
}

Lexicon load_lexicon(std::istream& in) {
  auto parsed = detail::parse_checked(in);
  const Json& j = parsed.value;
  if (!j.is_object()) schema_error("top level must be an object");

  for (const auto& dup : parsed.duplicates) {
    if (dup.path.size() == 1 && dup.path[0] == "plurals" && dup.first_value != dup.second_value) {
      throw InconsistentPlural(text::normalize(dup.key));
    }
  }

  Lexicon lex;
  if (auto it = j.find("synonyms"); it != j.end()) {
    if (!it->is_array()) schema_error("synonyms must be an array of arrays");
    for (const auto& group : *it) {
      if (!group.is_array()) schema_error("synonyms must be an array of arrays");
      std::vector<std::string> terms;
      for (const auto& t : group) {
        if (!t.is_string()) schema_error("synonym terms must be strings");
        terms.push_back(text::normalize(t.get<std::string>()));
      }
      for (const auto& a : terms) {
        for (const auto& b : terms) {
          if (a != b) lex.synonyms[a].insert(b);
        }
      }
    }
  }
  for (auto& [term, broader] : string_map(j, "hypernyms")) {
    if (term != broader) lex.hypernyms[term] = broader;
  }
  for (auto& [singular, plural] : string_map(j, "plurals")) {
    if (auto it = lex.plural_of.find(singular); it != lex.plural_of.end() && it->second != plural) {
      throw InconsistentPlural(singular);
    }
    if (auto it = lex.singular_of.find(plural); it != lex.singular_of.end() && it->second != singular) {
      throw InconsistentPlural(plural);
    }
    lex.plural_of[singular] = plural;
    lex.singular_of[plural] = singular;
  }
  for (auto& t : string_array(j, "uncountable")) lex.uncountable.insert(std::move(t));
  for (auto& c : string_array(j, "colors")) lex.colors.insert(std::move(c));
  if (lex.colors.empty()) schema_error("colors must be a non-empty array");
  for (auto& [word, article] : string_map(j, "article_overrides")) {
    if (article != "a" && article != "an") schema_error("article override for '" + word + "' must be \"a\" or \"an\"");
    lex.article_overrides[word] = article;
  }
  return lex;
}

Lexicon load_lexicon(std::string_view json_text) {
  std::istringstream in{std::string(json_text)};
  return load_lexicon(in);
}

std::string serialize_lexicon(const Lexicon& lex) {
  Json synonyms = Json::array();
  for (const auto& [a, group] : lex.synonyms) {
    for (const auto& b : group) {
      if (a < b) synonyms.push_back(Json::array({a, b}));
    }
  }
  Json hypernyms = Json::object();
  for (const auto& [k, v] : lex.hypernyms) hypernyms[k] = v;
  Json plurals = Json::object();
  for (const auto& [k, v] : lex.plural_of) plurals[k] = v;
  Json overrides = Json::object();
  for (const auto& [k, v] : lex.article_overrides) overrides[k] = v;
  Json root = {{"synonyms", std::move(synonyms)},
               {"hypernyms", std::move(hypernyms)},
               {"plurals", std::move(plurals)},
               {"uncountable", std::vector<std::string>(lex.uncountable.begin(), lex.uncountable.end())},
               {"colors", std::vector<std::string>(lex.colors.begin(), lex.colors.end())},
               {"article_overrides", std::move(overrides)}};
  return root.dump(2);
}

MatchKind same_term(std::string_view question_term, std::string_view graph_term, const Lexicon& lex) {
  std::string qbuf;
  std::string gbuf;
  const std::string_view q = text::is_normalized(question_term) ? question_term : (qbuf = text::normalize(question_term));
  const std::string_view g = text::is_normalized(graph_term) ? graph_term : (gbuf = text::normalize(graph_term));
  if (q == g) return MatchKind::Exact;
  const std::string_view qs = lex.singular(q);
  const std::string_view gs = lex.singular(g);
  if (qs == gs) return MatchKind::Number;
  const std::array<std::string_view, 2> qforms{q, qs};
  const std::array<std::string_view, 2> gforms{g, gs};
  for (auto a : qforms) {
    for (auto b : gforms) {
      if (lex.are_synonyms(a, b)) return MatchKind::Synonym;
    }
  }
  for (auto narrow : gforms) {
    for (auto broad : qforms) {
      if (lex.is_hyponym_of(narrow, broad)) return MatchKind::Hyponym;
    }
  }
  return MatchKind::None;
}

std::string core_noun_phrase(std::string_view phrase) {
  auto words = split_words(text::normalize(phrase));
  size_t begin = 0;
  while (begin < words.size() && contains(kLeadingDeterminers, words[begin])) ++begin;
  if (begin == words.size()) return {};
  size_t end = begin + 1;
  while (end < words.size() && !contains(kClauseMarkers, words[end])) ++end;
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::string head_noun(std::string_view phrase) {
  auto core = core_noun_phrase(phrase);
  auto pos = core.rfind(' ');
  return pos == std::string::npos ? core : core.substr(pos + 1);
}

bool is_plural_phrase(std::string_view phrase, const Lexicon& lex) {
  return lex.is_plural_term(head_noun(phrase));
}

std::string indefinite_article(std::string_view noun_phrase, const Lexicon& lex) {
  const auto normalized = text::normalize(noun_phrase);
  if (normalized.empty()) throw PreconditionViolation("indefinite_article: empty noun phrase");
  const auto head = head_noun(normalized);
  if (lex.is_plural_term(head) || lex.is_uncountable_term(head)) return "";
  const auto first_word = normalized.substr(0, normalized.find(' '));
  if (auto it = lex.article_overrides.find(first_word); it != lex.article_overrides.end()) return it->second;
  switch (normalized.front()) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return "an";
    default:
      return "a";
  }
}

}  // namespace contrastgen
