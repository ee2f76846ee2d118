#include <cstdio>

#include "contrastgen/perturbation.hpp"
#include "json_util.hpp"

namespace contrastgen {

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", v);
  return buf;
}

}  // namespace

std::string format_stats(const GenStats& s) {
  std::string out;
  char buf[200];
  auto row = [&](const char* label, const std::string& value) {
    std::snprintf(buf, sizeof buf, "%-18s %12s\n", label, value.c_str());
    out += buf;
  };
  row("# Images", std::to_string(s.images));
  row("# QA pairs", std::to_string(s.qa_pairs));
  row("# Aug. QA pairs", std::to_string(s.aug_pairs));
  row("# Aug. images", std::to_string(s.aug_images));
  row("% Aug. images", pct(s.pct_aug_images()));
  row("% Aug. QA pairs", pct(s.pct_aug_pairs()));
  out += "\n";
  std::snprintf(buf, sizeof buf, "%-34s %16s %14s %16s\n", "Question template", "# Aug. QA pairs", "# Aug. images",
                "% Aug. QA pairs");
  out += buf;
  for (auto kind : kAllTemplateKinds) {
    TemplateStats t;
    if (auto it = s.per_template.find(kind); it != s.per_template.end()) t = it->second;
    const double share = s.qa_pairs ? 100.0 * t.aug_pairs / s.qa_pairs : 0.0;
    std::snprintf(buf, sizeof buf, "%-34s %16zu %14zu %16s\n", template_label(kind).c_str(), t.aug_pairs,
                  t.aug_images, pct(share).c_str());
    out += buf;
  }
  return out;
}

std::string stats_to_json(const GenStats& s) {
  detail::Json per_template = detail::Json::object();
  for (auto kind : kAllTemplateKinds) {
    TemplateStats t;
    if (auto it = s.per_template.find(kind); it != s.per_template.end()) t = it->second;
    per_template[to_string(kind)] = {{"matched_questions", t.matched_questions},
                                     {"aug_pairs", t.aug_pairs},
                                     {"aug_images", t.aug_images}};
  }
  detail::Json j{{"images", s.images},
                 {"qa_pairs", s.qa_pairs},
                 {"matched_questions", s.matched_questions},
                 {"aug_pairs", s.aug_pairs},
                 {"aug_images", s.aug_images},
                 {"pct_aug_images", s.pct_aug_images()},
                 {"pct_aug_pairs", s.pct_aug_pairs()},
                 {"contrast_sets", s.contrast_sets},
                 {"missing_graphs", s.missing_graphs},
                 {"per_template", std::move(per_template)}};
  return j.dump(2);
}

}  // namespace contrastgen
