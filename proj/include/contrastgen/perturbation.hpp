#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contrastgen/lexicon.hpp"
#include "contrastgen/oracle.hpp"
#include "contrastgen/scene_graph.hpp"
#include "contrastgen/templates.hpp"

namespace contrastgen {

// How many scene graphs mention each unordered pair of distinct object names.
struct CoOccurrence {
  std::map<std::pair<std::string, std::string>, int> pair_counts;  // first < second
  std::map<std::string, int> name_counts;                          // graphs mentioning the name
  int total_graphs = 0;

  int count(std::string_view a, std::string_view b) const;
  // Every object name seen in any graph, ascending. Used as the distractor pool.
  std::vector<std::string> vocabulary() const;
};

CoOccurrence build_cooccurrence(std::span<const SceneGraph> graphs);
CoOccurrence build_cooccurrence(const SceneGraphs& graphs);

// Jaccard similarity of padded character-trigram multisets, in [0, 1].
double textual_similarity(std::string_view a, std::string_view b);

struct Perturbation {
  QAPair original;
  std::string perturbed_question;
  std::string perturbed_answer;
  TemplateKind kind = TemplateKind::WhichSide;
  Atom replaced_atom = Atom::ObjectX;
  std::string old_atom;
  std::string new_atom;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

struct ContrastSet {
  QAPair original;
  std::vector<Perturbation> members;

  friend bool operator==(const ContrastSet&, const ContrastSet&) = default;
};

struct GenConfig {
  int max_aug = 1;
  std::uint64_t seed = 0;
  double similarity_threshold = 0.1;
  int candidate_pool = 20;
  bool geometry_fallback = true;
  std::set<TemplateKind> active_templates{kAllTemplateKinds.begin(), kAllTemplateKinds.end()};

  // Throws PreconditionViolation when the invariants do not hold.
  void validate() const;
  OracleOptions oracle_options() const { return {geometry_fallback}; }
};

// (image id, normalized question text)
using QuestionKey = std::pair<ImageId, std::string>;
using QuestionIndex = std::set<QuestionKey>;

QuestionKey question_key(const ImageId& image, std::string_view question);

// Label-flipping perturbations of one matched question, at most cfg.max_aug.
// Empty when the oracle is not confident about the original, disagrees with
// its gold answer, or no candidate survives verification.
std::vector<Perturbation> perturb(const TemplateMatch& m, const SceneGraph& graph, const CoOccurrence& cooc,
                                  const Lexicon& lex, std::span<const std::string> vocab, const GenConfig& cfg,
                                  const QuestionIndex& existing);

// Same candidates as perturb() before the max_aug cap (at most candidate_pool).
// perturb() is always a prefix of this list.
std::vector<Perturbation> perturbation_pool(const TemplateMatch& m, const SceneGraph& graph,
                                            const CoOccurrence& cooc, const Lexicon& lex,
                                            std::span<const std::string> vocab, const GenConfig& cfg,
                                            const QuestionIndex& existing);

struct TemplateStats {
  std::size_t matched_questions = 0;
  std::size_t aug_pairs = 0;
  std::size_t aug_images = 0;
};

struct GenStats {
  std::size_t images = 0;
  std::size_t qa_pairs = 0;
  std::size_t matched_questions = 0;
  std::size_t aug_pairs = 0;
  std::size_t aug_images = 0;
  std::size_t contrast_sets = 0;
  std::size_t missing_graphs = 0;
  std::map<TemplateKind, TemplateStats> per_template;

  double pct_aug_images() const { return images ? 100.0 * aug_images / images : 0.0; }
  double pct_aug_pairs() const { return qa_pairs ? 100.0 * aug_pairs / qa_pairs : 0.0; }
};

struct GenerationResult {
  std::vector<ContrastSet> sets;  // input question order, non-empty sets only
  GenStats stats;
  std::vector<std::string> warnings;
};

// Runs match -> oracle -> perturb over a question file. Images are processed
// independently on `workers` threads; output does not depend on the count.
GenerationResult generate(const std::vector<QAPair>& questions, const SceneGraphs& graphs,
                          const CoOccurrence& cooc, const Lexicon& lex, const GenConfig& cfg,
                          unsigned workers = 1);

// Per-template and total counts recomputed from contrast sets, in the same shape
// generate() reports.
GenStats compute_stats(const std::vector<ContrastSet>& sets, const std::vector<QAPair>& questions);

// Text table with the rows "# Images", "# QA pairs", "# Aug. QA pairs",
// "# Aug. images", "% Aug. images", "% Aug. QA pairs", then one row per template.
std::string format_stats(const GenStats& stats);
std::string stats_to_json(const GenStats& stats);

struct VerificationFailure {
  std::string question_id;
  std::string perturbed_question;
  std::string reason;
};

// Re-runs template matching and the oracle on every emitted pair.
std::vector<VerificationFailure> verify(const std::vector<ContrastSet>& sets, const SceneGraphs& graphs,
                                        const Lexicon& lex, const OracleOptions& opts = {});

}  // namespace contrastgen
