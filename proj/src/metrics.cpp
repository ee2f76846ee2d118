#include "contrastgen/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "contrastgen/contrast_io.hpp"
#include "contrastgen/error.hpp"
#include "contrastgen/text.hpp"
#include "json_util.hpp"

namespace contrastgen {

using detail::Json;

PredictionSet load_predictions(std::istream& in) {
  auto parsed = detail::parse_checked(in);
  for (const auto& dup : parsed.duplicates) {
    if (dup.path.empty()) throw DuplicateKey(dup.key);
  }
  if (!parsed.value.is_object()) throw Error("predictions: top level must be a JSON object");
  PredictionSet preds;
  for (const auto& [key, value] : parsed.value.items()) {
    if (!value.is_string()) throw Error("predictions: answer for '" + key + "' is not a string");
    preds.answers[key] = text::lower(text::trim(value.get<std::string>()));
  }
  return preds;
}

ConsistencyReport evaluate(const std::vector<ContrastSet>& sets, const PredictionSet& preds) {
  std::vector<std::string> missing;
  auto lookup = [&](const std::string& key) -> const std::string* {
    auto it = preds.answers.find(key);
    if (it == preds.answers.end()) {
      missing.push_back(key);
      return nullptr;
    }
    return &it->second;
  };
  auto correct = [](const std::string* predicted, const std::string& gold) {
    return predicted && *predicted == text::lower(text::trim(gold));
  };

  ConsistencyReport r;
  std::size_t orig_correct = 0;
  std::size_t pert_correct = 0;
  std::size_t consistent = 0;
  double set_acc_sum = 0.0;
  for (const auto& set : sets) {
    if (set.members.empty()) continue;
    ++r.n_sets;
    std::size_t set_correct = correct(lookup(set.original.question_id), set.original.answer) ? 1 : 0;
    orig_correct += set_correct;
    for (std::size_t i = 0; i < set.members.size(); ++i) {
      const auto& p = set.members[i];
      const bool ok = correct(lookup(perturbation_key(set.original.question_id, i)), p.perturbed_answer);
      set_correct += ok;
      pert_correct += ok;
      auto& t = r.per_template[p.kind];
      ++t.count;
      t.correct += ok;
    }
    const std::size_t set_size = set.members.size() + 1;
    r.n_questions += set_size;
    r.n_perturbed += set.members.size();
    if (set_correct == set_size) ++consistent;
    set_acc_sum += static_cast<double>(set_correct) / static_cast<double>(set_size);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    throw MissingPrediction(std::move(missing));
  }
  auto frac = [](std::size_t num, std::size_t den) { return den ? static_cast<double>(num) / den : 0.0; };
  r.accuracy_original = frac(orig_correct, r.n_sets);
  r.accuracy_perturbed = frac(pert_correct, r.n_perturbed);
  r.accuracy_overall = frac(orig_correct + pert_correct, r.n_questions);
  r.accuracy_set_mean = r.n_sets ? set_acc_sum / static_cast<double>(r.n_sets) : 0.0;
  r.consistency = frac(consistent, r.n_sets);
  return r;
}

std::string format_report(const ConsistencyReport& r, bool by_template) {
  std::string out;
  char buf[160];
  auto row = [&](const char* label, const std::string& value) {
    std::snprintf(buf, sizeof buf, "%-24s %12s\n", label, value.c_str());
    out += buf;
  };
  auto pct = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f%%", 100.0 * v);
    return std::string(b);
  };
  row("Contrast sets", std::to_string(r.n_sets));
  row("Questions", std::to_string(r.n_questions));
  row("Perturbed questions", std::to_string(r.n_perturbed));
  row("Accuracy (original)", pct(r.accuracy_original));
  row("Accuracy (perturbed)", pct(r.accuracy_perturbed));
  row("Accuracy (overall)", pct(r.accuracy_overall));
  row("Consistency", pct(r.consistency));
  if (by_template) {
    out += "\n";
    std::snprintf(buf, sizeof buf, "%-34s %10s %10s\n", "Template", "Count", "Accuracy");
    out += buf;
    for (const auto& [kind, t] : r.per_template) {
      std::snprintf(buf, sizeof buf, "%-34s %10zu %10s\n", template_label(kind).c_str(), t.count,
                    pct(t.accuracy()).c_str());
      out += buf;
    }
  }
  return out;
}

std::string report_to_json(const ConsistencyReport& r) {
  Json per_template = Json::object();
  for (const auto& [kind, t] : r.per_template) {
    per_template[to_string(kind)] = Json{{"accuracy", t.accuracy()}, {"count", t.count}, {"correct", t.correct}};
  }
  Json j{{"n_sets", r.n_sets},
         {"n_questions", r.n_questions},
         {"n_perturbed", r.n_perturbed},
         {"accuracy_original", r.accuracy_original},
         {"accuracy_perturbed", r.accuracy_perturbed},
         {"accuracy_overall", r.accuracy_overall},
         {"accuracy_set_mean", r.accuracy_set_mean},
         {"consistency", r.consistency},
         {"per_template", std::move(per_template)}};
  return j.dump(2);
}

}  // namespace contrastgen
