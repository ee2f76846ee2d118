#include "contrastgen/perturbation.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

#include "contrastgen/error.hpp"
#include "contrastgen/grounding.hpp"
#include "contrastgen/text.hpp"

namespace contrastgen {

int CoOccurrence::count(std::string_view a, std::string_view b) const {
  auto na = text::normalize(a);
  auto nb = text::normalize(b);
  if (na == nb) return 0;
  if (nb < na) std::swap(na, nb);
  auto it = pair_counts.find({na, nb});
  return it == pair_counts.end() ? 0 : it->second;
}

std::vector<std::string> CoOccurrence::vocabulary() const {
  std::vector<std::string> names;
  names.reserve(name_counts.size());
  for (const auto& [name, _] : name_counts) names.push_back(name);
  return names;
}

CoOccurrence build_cooccurrence(std::span<const SceneGraph> graphs) {
  CoOccurrence c;
  for (const auto& g : graphs) {
    std::set<std::string> names;
    for (const auto& [_, obj] : g.objects) names.insert(text::normalize(obj.name));
    for (auto a = names.begin(); a != names.end(); ++a) {
      ++c.name_counts[*a];
      for (auto b = std::next(a); b != names.end(); ++b) ++c.pair_counts[{*a, *b}];
    }
    ++c.total_graphs;
  }
  return c;
}

CoOccurrence build_cooccurrence(const SceneGraphs& graphs) {
  std::vector<SceneGraph> flat;
  flat.reserve(graphs.size());
  for (const auto& [_, g] : graphs) flat.push_back(g);
  return build_cooccurrence(std::span<const SceneGraph>(flat));
}

double textual_similarity(std::string_view a, std::string_view b) {
  auto trigrams = [](std::string_view s) {
    const std::string padded = "\x01\x01" + text::normalize(s) + "\x01\x01";
    std::map<std::string, int> counts;
    for (size_t i = 0; i + 3 <= padded.size(); ++i) ++counts[padded.substr(i, 3)];
    return counts;
  };
  if (text::normalize(a).empty() || text::normalize(b).empty()) {
    throw PreconditionViolation("textual_similarity: empty string");
  }
  const auto ta = trigrams(a);
  const auto tb = trigrams(b);
  long inter = 0;
  long uni = 0;
  auto ia = ta.begin();
  auto ib = tb.begin();
  while (ia != ta.end() || ib != tb.end()) {
    if (ib == tb.end() || (ia != ta.end() && ia->first < ib->first)) {
      uni += ia++->second;
    } else if (ia == ta.end() || ib->first < ia->first) {
      uni += ib++->second;
    } else {
      inter += std::min(ia->second, ib->second);
      uni += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

void GenConfig::validate() const {
  if (max_aug < 1) throw PreconditionViolation("max_aug must be >= 1");
  if (candidate_pool < max_aug) throw PreconditionViolation("candidate_pool must be >= max_aug");
  if (!(similarity_threshold >= 0.0 && similarity_threshold <= 1.0)) {
    throw PreconditionViolation("similarity_threshold must lie in [0, 1]");
  }
}

QuestionKey question_key(const ImageId& image, std::string_view question) {
  auto q = text::normalize(question);
  while (!q.empty() && (q.back() == '?' || q.back() == ' ')) q.pop_back();
  return {image, std::move(q)};
}

namespace {

struct Candidate {
  Atom atom;
  std::string replacement;
  double score;
  // Set when the strategy knows the answer the replacement must produce.
  std::optional<std::string> expected;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::set<std::string> graph_names(const SceneGraph& g) {
  std::set<std::string> names;
  for (const auto& [_, obj] : g.objects) names.insert(obj.name);
  return names;
}

std::vector<Candidate> by_similarity(const std::set<std::string>& names, std::string_view slot, double threshold) {
  std::vector<Candidate> out;
  const auto core = core_noun_phrase(slot);
  if (core.empty()) return out;
  for (const auto& n : names) {
    double s = textual_similarity(n, core);
    if (s >= threshold) out.push_back({Atom::ObjectX, n, s, std::nullopt});
  }
  return out;
}

template <class Names>
std::vector<Candidate> by_correlation(const Names& names, Atom atom, std::string_view other_slot,
                                      const CoOccurrence& cooc, std::optional<std::string> expected) {
  std::vector<Candidate> out;
  const auto other = core_noun_phrase(other_slot);
  for (const auto& n : names) {
    out.push_back({atom, std::string(n), static_cast<double>(cooc.count(n, other)), expected});
  }
  return out;
}

std::vector<Candidate> absent_from(std::span<const std::string> vocab, const SceneGraph& g, const Lexicon& lex) {
  std::vector<Candidate> out;
  for (const auto& n : vocab) {
    if (!n.empty() && !is_present(n, g, lex)) out.push_back({Atom::ObjectX, n, 0.0, std::nullopt});
  }
  return out;
}

std::vector<Candidate> candidates_for(const TemplateMatch& m, const std::string& gold, const SceneGraph& g,
                                      const CoOccurrence& cooc, const Lexicon& lex,
                                      std::span<const std::string> vocab, const GenConfig& cfg) {
  const auto names = graph_names(g);
  switch (m.kind) {
    case TemplateKind::WhichSide:
    case TemplateKind::WhatColor:
      return by_similarity(names, m.x, cfg.similarity_threshold);

    case TemplateKind::SeeXOrY: {
      if (gold == "no") return by_correlation(names, Atom::ObjectX, *m.y, cooc, "yes");
      const bool x_present = is_present(m.x, g, lex);
      const bool y_present = is_present(*m.y, g, lex);
      if (x_present == y_present) return {};  // both present: no single swap can reach "no"
      std::vector<std::string> absent;
      for (auto& c : absent_from(vocab, g, lex)) absent.push_back(std::move(c.replacement));
      return x_present ? by_correlation(absent, Atom::ObjectX, *m.y, cooc, "no")
                       : by_correlation(absent, Atom::ObjectY, m.x, cooc, "no");
    }

    case TemplateKind::AnyXNearY: {
      if (gold == "yes") {
        std::vector<std::string> absent;
        for (auto& c : absent_from(vocab, g, lex)) absent.push_back(std::move(c.replacement));
        return by_correlation(absent, Atom::ObjectX, *m.y, cooc, "no");
      }
      std::set<std::string> neighbors;
      for (const auto& yid : ground(*m.y, g, lex).object_ids) {
        for (const auto& [id, obj] : g.objects) {
          if (id == yid) continue;
          const auto& yobj = g.objects.at(yid);
          auto points_at = [](const SGObject& from, const ObjectId& to) {
            return std::any_of(from.relations.begin(), from.relations.end(), [&](const SGRelation& r) {
              return r.target == to && r.predicate == kNearPredicate;
            });
          };
          if (points_at(obj, yid) || points_at(yobj, id)) neighbors.insert(obj.name);
        }
      }
      return by_correlation(neighbors, Atom::ObjectX, *m.y, cooc, "yes");
    }

    case TemplateKind::IsXRelYPerturbObject: {
      auto out = by_correlation(names, Atom::ObjectX, *m.y, cooc, std::nullopt);
      auto ys = by_correlation(names, Atom::ObjectY, m.x, cooc, std::nullopt);
      out.insert(out.end(), ys.begin(), ys.end());
      return out;
    }

    case TemplateKind::IsXRelYPerturbRel:
      return {{Atom::Relation, opposite_side(*m.rel), 0.0, std::nullopt}};
  }
  return {};
}

std::optional<Perturbation> try_candidate(const TemplateMatch& m, const Candidate& c, const std::string& gold,
                                          const SceneGraph& g, const Lexicon& lex, const GenConfig& cfg,
                                          const QuestionIndex& existing) {
  const std::string& old_atom =
      c.atom == Atom::ObjectX ? m.x : c.atom == Atom::ObjectY ? *m.y : *m.rel;
  if (text::normalize(c.replacement) == text::normalize(old_atom)) return std::nullopt;
  // "Do you see a wall or a wall?" is not a meaningful question.
  if (c.atom != Atom::Relation && m.y) {
    const std::string& other = c.atom == Atom::ObjectX ? *m.y : m.x;
    if (same_term(c.replacement, head_noun(other), lex) != MatchKind::None ||
        same_term(head_noun(other), c.replacement, lex) != MatchKind::None) {
      return std::nullopt;
    }
  }

  const auto question = substitute_atom(m, c.atom, c.replacement, lex);
  const auto key = question_key(m.original.image_id, question);
  if (key == question_key(m.original.image_id, m.original.question)) return std::nullopt;
  if (existing.count(key)) return std::nullopt;

  // The rewritten question must parse back into the same template with the new atom in place.
  const TemplateMatch* rematch = nullptr;
  auto matches = match_template(question);
  for (const auto& mm : matches) {
    if (mm.kind == m.kind) rematch = &mm;
  }
  if (!rematch) return std::nullopt;
  const std::optional<std::string> slot =
      c.atom == Atom::ObjectX ? std::optional(rematch->x) : c.atom == Atom::ObjectY ? rematch->y : rematch->rel;
  if (!slot || *slot != c.replacement) return std::nullopt;

  auto ans = try_answer_slots(rematch->kind, rematch->x, rematch->y, rematch->rel, g, lex, cfg.oracle_options());
  if (!ans || !ans->confident || ans->value == gold) return std::nullopt;
  if (c.expected && ans->value != *c.expected) return std::nullopt;

  Perturbation p;
  p.original = m.original;
  p.perturbed_question = question;
  p.perturbed_answer = ans->value;
  p.kind = m.kind;
  p.replaced_atom = c.atom;
  p.old_atom = old_atom;
  p.new_atom = c.replacement;
  return p;
}

}  // namespace

std::vector<Perturbation> perturbation_pool(const TemplateMatch& m, const SceneGraph& graph,
                                            const CoOccurrence& cooc, const Lexicon& lex,
                                            std::span<const std::string> vocab, const GenConfig& cfg,
                                            const QuestionIndex& existing) {
  cfg.validate();
  if (!cfg.active_templates.count(m.kind)) return {};
  auto original = try_answer_slots(m.kind, m.x, m.y, m.rel, graph, lex, cfg.oracle_options());
  if (!original || !original->confident) return {};
  const auto gold = text::normalize(m.original.answer);
  if (original->value != gold) return {};  // the graph disagrees with the dataset label

  auto candidates = candidates_for(m, gold, graph, cooc, lex, vocab, cfg);
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.replacement != b.replacement) return a.replacement < b.replacement;
    return a.atom < b.atom;
  });

  std::vector<Perturbation> pool;
  std::set<std::string> seen;
  for (const auto& c : candidates) {
    if (pool.size() >= static_cast<size_t>(cfg.candidate_pool)) break;
    auto p = try_candidate(m, c, gold, graph, lex, cfg, existing);
    if (!p) continue;
    if (!seen.insert(question_key(m.original.image_id, p->perturbed_question).second).second) continue;
    pool.push_back(std::move(*p));
  }

  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(fnv1a(m.original.question_id)) ^
                                 (static_cast<std::uint64_t>(m.kind) + 1)));
  for (size_t i = pool.size(); i > 1; --i) {
    std::swap(pool[i - 1], pool[rng() % i]);
  }
  return pool;
}

std::vector<Perturbation> perturb(const TemplateMatch& m, const SceneGraph& graph, const CoOccurrence& cooc,
                                  const Lexicon& lex, std::span<const std::string> vocab, const GenConfig& cfg,
                                  const QuestionIndex& existing) {
  auto pool = perturbation_pool(m, graph, cooc, lex, vocab, cfg, existing);
  if (pool.size() > static_cast<size_t>(cfg.max_aug)) pool.resize(static_cast<size_t>(cfg.max_aug));
  return pool;
}

GenStats compute_stats(const std::vector<ContrastSet>& sets, const std::vector<QAPair>& questions) {
  GenStats s;
  std::set<ImageId> images;
  for (const auto& q : questions) images.insert(q.image_id);
  s.images = images.size();
  s.qa_pairs = questions.size();
  for (const auto& q : questions) {
    auto matches = match_template(q);
    if (!matches.empty()) ++s.matched_questions;
    for (const auto& m : matches) ++s.per_template[m.kind].matched_questions;
  }
  std::set<ImageId> aug_images;
  std::map<TemplateKind, std::set<ImageId>> per_template_images;
  for (const auto& set : sets) {
    if (set.members.empty()) continue;
    ++s.contrast_sets;
    aug_images.insert(set.original.image_id);
    for (const auto& p : set.members) {
      ++s.aug_pairs;
      ++s.per_template[p.kind].aug_pairs;
      per_template_images[p.kind].insert(set.original.image_id);
    }
  }
  s.aug_images = aug_images.size();
  for (const auto& [kind, imgs] : per_template_images) s.per_template[kind].aug_images = imgs.size();
  return s;
}

GenerationResult generate(const std::vector<QAPair>& questions, const SceneGraphs& graphs,
                          const CoOccurrence& cooc, const Lexicon& lex, const GenConfig& cfg, unsigned workers) {
  cfg.validate();
  const auto vocab = cooc.vocabulary();

  // Questions grouped by image, each group in input order.
  std::map<ImageId, std::vector<size_t>> by_image;
  for (size_t i = 0; i < questions.size(); ++i) by_image[questions[i].image_id].push_back(i);
  std::vector<const std::pair<const ImageId, std::vector<size_t>>*> groups;
  for (const auto& entry : by_image) groups.push_back(&entry);

  std::vector<std::vector<Perturbation>> per_question(questions.size());
  std::vector<char> missing(questions.size(), 0);

  auto process = [&](const ImageId& image, const std::vector<size_t>& idx) {
    auto git = graphs.find(image);
    if (git == graphs.end()) {
      for (size_t i : idx) missing[i] = 1;
      return;
    }
    const SceneGraph& graph = git->second;
    QuestionIndex existing;
    for (size_t i : idx) existing.insert(question_key(image, questions[i].question));

    // A perturbed question belongs to the first source question that proposes it,
    // independent of max_aug, so smaller caps stay prefixes of larger ones.
    std::set<std::string> claimed;
    for (size_t i : idx) {
      std::vector<Perturbation> merged;
      for (const auto& m : match_template(questions[i])) {
        auto pool = perturbation_pool(m, graph, cooc, lex, vocab, cfg, existing);
        for (auto& p : pool) {
          if (claimed.insert(question_key(image, p.perturbed_question).second).second) merged.push_back(std::move(p));
        }
      }
      if (merged.size() > static_cast<size_t>(cfg.max_aug)) merged.resize(static_cast<size_t>(cfg.max_aug));
      per_question[i] = std::move(merged);
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(groups.size())));
  if (n_workers <= 1) {
    for (const auto* g : groups) process(g->first, g->second);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (size_t k = next++; k < groups.size(); k = next++) process(groups[k]->first, groups[k]->second);
      });
    }
  }

  GenerationResult result;
  for (size_t i = 0; i < questions.size(); ++i) {
    if (missing[i]) {
      result.warnings.push_back("MissingGraph(" + questions[i].image_id + "): question " + questions[i].question_id +
                                " skipped");
      continue;
    }
    if (!per_question[i].empty()) result.sets.push_back({questions[i], std::move(per_question[i])});
  }
  result.stats = compute_stats(result.sets, questions);
  result.stats.missing_graphs = static_cast<size_t>(std::count(missing.begin(), missing.end(), 1));
  return result;
}

std::vector<VerificationFailure> verify(const std::vector<ContrastSet>& sets, const SceneGraphs& graphs,
                                        const Lexicon& lex, const OracleOptions& opts) {
  std::vector<VerificationFailure> failures;
  for (const auto& set : sets) {
    auto fail = [&](const Perturbation& p, std::string reason) {
      failures.push_back({set.original.question_id, p.perturbed_question, std::move(reason)});
    };
    auto git = graphs.find(set.original.image_id);
    for (const auto& p : set.members) {
      if (git == graphs.end()) {
        fail(p, "no scene graph for image " + set.original.image_id);
        continue;
      }
      if (text::normalize(p.perturbed_answer) == text::normalize(set.original.answer)) {
        fail(p, "answer did not flip");
        continue;
      }
      if (question_key(set.original.image_id, p.perturbed_question) ==
          question_key(set.original.image_id, set.original.question)) {
        fail(p, "perturbed question equals the original");
        continue;
      }
      const TemplateMatch* m = nullptr;
      auto matches = match_template(p.perturbed_question);
      for (const auto& mm : matches) {
        if (mm.kind == p.kind) m = &mm;
      }
      if (!m) {
        fail(p, "perturbed question no longer matches template " + to_string(p.kind));
        continue;
      }
      auto ans = try_answer_slots(m->kind, m->x, m->y, m->rel, git->second, lex, opts);
      if (!ans) fail(p, "oracle cannot answer the perturbed question");
      else if (!ans->confident) fail(p, "oracle answer is not confident");
      else if (ans->value != text::normalize(p.perturbed_answer)) fail(p, "oracle answers '" + ans->value + "'");
    }
  }
  return failures;
}

}  // namespace contrastgen
