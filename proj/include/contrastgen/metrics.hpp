#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "contrastgen/perturbation.hpp"

namespace contrastgen {

// question key -> predicted answer (lowercased, trimmed). Keys are source
// question ids or perturbation keys "<question_id>#<index>".
struct PredictionSet {
  std::map<std::string, std::string> answers;
};

// Throws NotJson, DuplicateKey, or Error for non-string values.
PredictionSet load_predictions(std::istream& in);

struct TemplateAccuracy {
  std::size_t correct = 0;
  std::size_t count = 0;
  double accuracy() const { return count ? static_cast<double>(correct) / count : 0.0; }
};

struct ConsistencyReport {
  std::size_t n_sets = 0;  // sets with at least one perturbation
  std::size_t n_questions = 0;
  std::size_t n_perturbed = 0;
  double accuracy_original = 0.0;
  double accuracy_perturbed = 0.0;
  double accuracy_overall = 0.0;   // correct questions / all questions
  double accuracy_set_mean = 0.0;  // mean over sets of per-set accuracy
  double consistency = 0.0;        // sets answered entirely correctly / n_sets
  std::map<TemplateKind, TemplateAccuracy> per_template;
};

// Throws MissingPrediction listing every absent key.
ConsistencyReport evaluate(const std::vector<ContrastSet>& sets, const PredictionSet& preds);

std::string format_report(const ConsistencyReport& r, bool by_template);
std::string report_to_json(const ConsistencyReport& r);

}  // namespace contrastgen
