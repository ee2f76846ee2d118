// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "brute_oracle.hpp"
#include "contrastgen/cli.hpp"
#include "contrastgen/contrast_io.hpp"
#include "contrastgen/metrics.hpp"
#include "contrastgen/oracle.hpp"
#include "contrastgen/perturbation.hpp"
#include "contrastgen/text.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "synth.hpp"
#include "token_diff.hpp"

using namespace contrastgen;
using namespace testsupport;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

// The corpus criteria 2 and 4 share.
struct FlipCorpus {
  Corpus corpus;
  GenerationResult result;
};

const FlipCorpus& flip_corpus() {
  static const FlipCorpus fc = [] {
    FlipCorpus out;
    out.corpus = random_corpus(2024, 80, default_lexicon(), 4);
    GenConfig cfg;
    cfg.max_aug = 5;
    cfg.seed = 7;
    const auto cooc = build_cooccurrence(out.corpus.graphs);
    out.result = generate(out.corpus.questions, out.corpus.graphs, cooc, default_lexicon(), cfg, 4);
    return out;
  }();
  return fc;
}

const Perturbation* find_perturbation(const std::vector<ContrastSet>& sets, const std::string& question,
                                      const std::string& answer) {
  for (const auto& s : sets) {
    for (const auto& p : s.members) {
      if (p.perturbed_question == question && p.perturbed_answer == answer) return &p;
    }
  }
  return nullptr;
}

Outcome criterion1() {
  const auto& lex = default_lexicon();
  const auto graphs = zebra_scene_graphs();
  const auto questions = zebra_scene_questions();
  const auto cooc = build_cooccurrence(graphs);
  GenConfig cfg;
  cfg.max_aug = 1;
  auto result = generate(questions, graphs, cooc, lex, cfg);

  const auto* wall = find_perturbation(result.sets, "Is there a wall near the puddle?", "no");
  const auto* right = find_perturbation(result.sets, "Is the puddle to the right of the zebra?", "no");
  std::string detail;
  if (!wall) detail += "missing (\"Is there a wall near the puddle?\",\"no\"); ";
  if (!right) detail += "missing (\"Is the puddle to the right of the zebra?\",\"no\"); ";
  if (!verify(result.sets, graphs, lex).empty()) detail += "self-verification failed; ";
  if (detail.empty()) detail = "both worked-example pairs produced verbatim";
  return {wall && right && detail.find("failed") == std::string::npos, detail};
}

Outcome criterion2() {
  const auto& fc = flip_corpus();
  const auto& lex = default_lexicon();
  std::size_t total = 0;
  std::size_t flipped = 0;
  std::set<TemplateKind> kinds;
  for (const auto& set : fc.result.sets) {
    const auto& g = fc.corpus.graphs.at(set.original.image_id);
    for (const auto& p : set.members) {
      ++total;
      kinds.insert(p.kind);
      for (const auto& m : match_template(p.perturbed_question)) {
        if (m.kind != p.kind) continue;
        auto ref = brute_answer(m.kind, m.x, m.y, m.rel, g, lex);
        if (ref && ref->confident && ref->value == p.perturbed_answer &&
            ref->value != text::normalize(set.original.answer)) {
          ++flipped;
        }
        break;
      }
    }
  }
  std::ostringstream d;
  d << flipped << "/" << total << " pairs flipped and brute-force verified over " << fc.corpus.graphs.size()
    << " graphs, " << kinds.size() << "/6 templates";
  return {total >= 1000 && flipped == total && kinds.size() == kAllTemplateKinds.size() &&
              fc.corpus.graphs.size() >= 50,
          d.str()};
}

Outcome criterion3() {
  const auto& lex = default_lexicon();
  std::mt19937_64 rng(99);
  std::size_t instances = 0;
  std::size_t agree = 0;
  std::string first_mismatch;
  for (int gi = 0; gi < 500; ++gi) {
    const auto g = random_graph(rng, "g" + std::to_string(gi), 10);
    const auto terms = question_terms(g, lex, rng, 3);
    const bool geometry = gi % 5 != 0;
    const OracleOptions opts{geometry};
    auto check = [&](TemplateKind kind, const std::string& x, const std::optional<std::string>& y,
                     const std::optional<std::string>& rel) {
      ++instances;
      const auto question = render(kind, x, y, rel, lex);
      std::optional<OracleAnswer> got;
      for (auto& m : match_template(question)) {
        if (m.kind != kind) continue;
        m.original.image_id = g.image_id;
        try {
          got = answer(m, g, lex, opts);
        } catch (const Unanswerable&) {
        }
      }
      const auto want = brute_answer(kind, x, y, rel, g, lex, geometry);
      if (got == want) {
        ++agree;
      } else if (first_mismatch.empty()) {
        first_mismatch = g.image_id + ": " + question;
      }
    };
    for (const auto& x : terms) {
      check(TemplateKind::WhichSide, x, std::nullopt, std::nullopt);
      check(TemplateKind::WhatColor, x, std::nullopt, std::nullopt);
      for (const auto& y : terms) {
        check(TemplateKind::SeeXOrY, x, y, std::nullopt);
        check(TemplateKind::AnyXNearY, x, y, std::nullopt);
        for (const char* rel : {"left", "right"}) {
          check(TemplateKind::IsXRelYPerturbRel, x, y, std::string(rel));
          check(TemplateKind::IsXRelYPerturbObject, x, y, std::string(rel));
        }
      }
    }
  }
  std::ostringstream d;
  d << agree << "/" << instances << " template instances agree with brute-force enumeration";
  if (!first_mismatch.empty()) d << "; first mismatch " << first_mismatch;
  return {agree == instances && instances > 0, d.str()};
}

Outcome criterion4() {
  const auto& fc = flip_corpus();
  std::size_t total = 0;
  std::size_t ok = 0;
  std::string first_bad;
  for (const auto& set : fc.result.sets) {
    for (const auto& p : set.members) {
      ++total;
      auto err = check_single_atom(p);
      if (err.empty()) {
        ++ok;
      } else if (first_bad.empty()) {
        first_bad = "\"" + p.original.question + "\" -> \"" + p.perturbed_question + "\": " + err;
      }
    }
  }
  std::ostringstream d;
  d << ok << "/" << total << " pairs are single-atom edits";
  if (!first_bad.empty()) d << "; first violation " << first_bad;
  return {total > 0 && ok == total, d.str()};
}

ContrastSet synthetic_set(const std::string& qid, std::size_t perturbed) {
  ContrastSet s;
  s.original = QAPair{qid, "img", "Is there a dog near the cat?", "yes", Source::Original};
  for (std::size_t i = 0; i < perturbed; ++i) {
    Perturbation p;
    p.original = s.original;
    p.perturbed_question = "Is there a bird near the cat? " + std::to_string(i);
    p.perturbed_answer = "no";
    p.kind = TemplateKind::AnyXNearY;
    s.members.push_back(p);
  }
  return s;
}

Outcome criterion5() {
  std::string detail;
  bool pass = true;

  // Set of four, two answered correctly.
  {
    const auto set = synthetic_set("ex", 3);
    PredictionSet preds;
    preds.answers = {{"ex", "yes"}, {"ex#0", "no"}, {"ex#1", "yes"}, {"ex#2", "yes"}};
    const auto r = evaluate({set}, preds);
    if (r.consistency != 0.0 || r.accuracy_overall != 0.5) {
      pass = false;
      detail += "worked example wrong; ";
    }
  }

  std::mt19937_64 rng(5);
  std::vector<ContrastSet> all;
  PredictionSet all_preds;
  std::size_t brute_consistent = 0;
  std::size_t brute_correct = 0;
  std::size_t brute_questions = 0;
  std::size_t trial_failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::string qid = "t" + std::to_string(trial);
    const std::size_t perturbed = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    auto set = synthetic_set(qid, perturbed);
    PredictionSet preds;
    std::size_t correct = 0;
    for (std::size_t i = 0; i <= perturbed; ++i) {
      const bool right = std::bernoulli_distribution(0.7)(rng);
      correct += right;
      const std::string key = i == 0 ? qid : perturbation_key(qid, i - 1);
      const std::string gold = i == 0 ? "yes" : "no";
      preds.answers[key] = right ? gold : "maybe";
    }
    const auto r = evaluate({set}, preds);
    const double brute_cons = correct == perturbed + 1 ? 1.0 : 0.0;
    const double brute_acc = static_cast<double>(correct) / static_cast<double>(perturbed + 1);
    if (r.consistency != brute_cons || r.accuracy_overall != brute_acc || r.consistency > r.accuracy_overall) {
      ++trial_failures;
    }
    brute_consistent += correct == perturbed + 1;
    brute_correct += correct;
    brute_questions += perturbed + 1;
    all_preds.answers.insert(preds.answers.begin(), preds.answers.end());
    all.push_back(std::move(set));
  }
  const auto agg = evaluate(all, all_preds);
  const double want_cons = static_cast<double>(brute_consistent) / 10000.0;
  const double want_acc = static_cast<double>(brute_correct) / static_cast<double>(brute_questions);
  if (trial_failures) {
    pass = false;
    detail += std::to_string(trial_failures) + " trials disagree with the recount; ";
  }
  if (agg.consistency != want_cons || agg.accuracy_overall != want_acc || agg.consistency > agg.accuracy_set_mean) {
    pass = false;
    detail += "aggregate recount mismatch; ";
  }
  if (pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "worked example 0/1; 10000 masks match recount, consistency <= accuracy on every trial "
                  "(aggregate %.4f <= %.4f)",
                  agg.consistency, agg.accuracy_overall);
    detail = buf;
  }
  return {pass, detail};
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::vector<std::string>> members_by_question(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& s : read_jsonl(in)) {
    for (const auto& p : s.members) out[s.original.question_id].push_back(p.perturbed_question);
  }
  return out;
}

Outcome criterion6() {
  TempDir dir;
  const auto corpus = random_corpus(11, 60, default_lexicon(), 3);
  const auto graphs = dir.write("graphs.json", serialize_scene_graphs(corpus.graphs));
  const auto questions = dir.write("questions.json", questions_to_json(corpus.questions));

  auto run = [&](int max_aug, const std::string& out, const std::string& workers) {
    return cli({"generate", "--graphs", graphs, "--questions", questions, "--max-aug", std::to_string(max_aug),
                "--seed", "42", "--workers", workers, "--out", dir.file(out)});
  };
  std::string detail;
  bool pass = true;
  for (int m : {1, 3, 5}) {
    const auto a = run(m, "a" + std::to_string(m), "1");
    const auto b = run(m, "b" + std::to_string(m), "4");
    if (a.code != 0 || b.code != 0) {
      return {false, "generate failed: " + a.err + b.err};
    }
    const auto ta = read_file(dir.file("a" + std::to_string(m)));
    if (ta != read_file(dir.file("b" + std::to_string(m)))) {
      pass = false;
      detail += "max_aug=" + std::to_string(m) + " runs differ; ";
    }
    for (const auto& [qid, members] : members_by_question(ta)) {
      if (members.size() > static_cast<std::size_t>(m)) {
        pass = false;
        detail += qid + " exceeds max_aug=" + std::to_string(m) + "; ";
        break;
      }
    }
  }
  const auto one = members_by_question(read_file(dir.file("a1")));
  const auto five = members_by_question(read_file(dir.file("a5")));
  std::size_t prefix_ok = 0;
  for (const auto& [qid, members] : five) {
    auto it = one.find(qid);
    if (it != one.end() && it->second.size() == 1 && it->second[0] == members[0]) ++prefix_ok;
  }
  if (prefix_ok != five.size() || one.size() != five.size()) {
    pass = false;
    detail += "max_aug=1 is not a prefix of max_aug=5 for " + std::to_string(five.size() - prefix_ok) + " sets; ";
  }
  if (pass) {
    detail = "identical bytes across reruns and worker counts; caps hold; " + std::to_string(prefix_ok) +
             " sets satisfy the prefix property";
  }
  return {pass && !five.empty(), detail};
}

Outcome criterion7() {
  TempDir dir;
  const auto corpus = random_corpus(31, 60, default_lexicon(), 3);
  const auto graphs = dir.write("graphs.json", serialize_scene_graphs(corpus.graphs));
  const auto questions = dir.write("questions.json", questions_to_json(corpus.questions));
  const auto contrast = dir.file("contrast.jsonl");
  auto gen = cli({"generate", "--graphs", graphs, "--questions", questions, "--max-aug", "3", "--out", contrast});
  if (gen.code != 0) return {false, "generate failed: " + gen.err};
  auto st = cli({"stats", "--contrast", contrast, "--questions", questions});
  if (st.code != 0) return {false, "stats failed: " + st.err};

  // Independent recount straight from the JSONL text.
  std::size_t pairs = 0;
  std::set<std::string> aug_images;
  std::map<std::string, std::size_t> t_pairs;
  std::map<std::string, std::set<std::string>> t_images;
  {
    std::istringstream in(read_file(contrast));
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      for (const auto& p : j.at("perturbations")) {
        ++pairs;
        aug_images.insert(j.at("image_id").get<std::string>());
        const auto t = p.at("template").get<std::string>();
        ++t_pairs[t];
        t_images[t].insert(j.at("image_id").get<std::string>());
      }
    }
  }
  std::set<std::string> images;
  for (const auto& q : corpus.questions) images.insert(q.image_id);
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.1f%%", 100.0 * pairs / corpus.questions.size());

  std::map<std::string, std::string> rows;
  std::map<std::string, std::vector<std::string>> template_rows;
  std::istringstream table(st.out);
  bool has_header = false;
  for (std::string line; std::getline(table, line);) {
    if (line.find("# Aug. QA pairs") != std::string::npos && line.find("# Aug. images") != std::string::npos &&
        line.find("% Aug. QA pairs") != std::string::npos) {
      has_header = true;
    }
    for (auto kind : kAllTemplateKinds) {
      const auto label = template_label(kind);
      if (line.rfind(label, 0) == 0) {
        std::istringstream cells(line.substr(label.size()));
        std::vector<std::string> v;
        for (std::string c; cells >> c;) v.push_back(c);
        template_rows[to_string(kind)] = v;
      }
    }
    const auto cut = line.find_last_of(' ');
    if (cut != std::string::npos && (line.rfind("# ", 0) == 0 || line.rfind("% ", 0) == 0)) {
      auto label = line.substr(0, cut);
      label.erase(label.find_last_not_of(' ') + 1);
      rows[label] = line.substr(cut + 1);
    }
  }
  std::vector<std::string> bad;
  auto expect = [&](const std::string& label, const std::string& want) {
    if (rows[label] != want) bad.push_back(label + "=" + rows[label] + " (recount " + want + ")");
  };
  expect("# Images", std::to_string(images.size()));
  expect("# QA pairs", std::to_string(corpus.questions.size()));
  expect("# Aug. QA pairs", std::to_string(pairs));
  expect("# Aug. images", std::to_string(aug_images.size()));
  expect("% Aug. QA pairs", pct);
  for (auto kind : kAllTemplateKinds) {
    const auto name = to_string(kind);
    const auto& v = template_rows[name];
    char tp[32];
    std::snprintf(tp, sizeof tp, "%.1f%%", 100.0 * t_pairs[name] / corpus.questions.size());
    if (v.size() != 3 || v[0] != std::to_string(t_pairs[name]) || v[1] != std::to_string(t_images[name].size()) ||
        v[2] != tp) {
      bad.push_back("row " + name);
    }
  }
  if (!has_header) bad.push_back("template table header");
  if (!bad.empty()) {
    std::string d;
    for (const auto& b : bad) d += b + "; ";
    return {false, d};
  }
  return {true, "all " + std::to_string(5 + kAllTemplateKinds.size()) + " rows match a recount of " +
                    std::to_string(pairs) + " pairs"};
}

Outcome criterion8() {
  const auto& lex = default_lexicon();
  std::mt19937_64 rng(8);
  std::vector<std::string> terms;
  for (const auto& n : name_pool()) {
    terms.push_back(n);
    if (auto it = lex.plural_of.find(n); it != lex.plural_of.end()) terms.push_back(it->second);
  }
  auto pick = [&] { return terms[std::uniform_int_distribution<std::size_t>(0, terms.size() - 1)(rng)]; };
  std::size_t total = 0;
  std::size_t ok = 0;
  std::string first_bad;
  for (auto kind : kAllTemplateKinds) {
    for (int i = 0; i < 1000; ++i) {
      const auto x = pick();
      std::optional<std::string> y;
      std::optional<std::string> rel;
      if (has_y_slot(kind)) y = pick();
      if (has_rel_slot(kind)) rel = std::bernoulli_distribution(0.5)(rng) ? "left" : "right";
      const auto q = render(kind, x, y, rel, lex);
      ++total;
      bool hit = false;
      for (const auto& m : match_template(q)) {
        if (m.kind == kind && m.x == x && m.y == y && m.rel == rel) hit = true;
      }
      if (hit) {
        ++ok;
      } else if (first_bad.empty()) {
        first_bad = q;
      }
    }
  }
  std::string d = std::to_string(ok) + "/" + std::to_string(total) + " rendered questions parse back exactly";
  if (!first_bad.empty()) d += "; first failure \"" + first_bad + "\"";
  return {ok == total, d};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "worked-example fidelity", 1.0, criterion1},
      {2, "flip guarantee", 10.0, criterion2},
      {3, "oracle equivalence", 30.0, criterion3},
      {4, "single-atom edit", 0.0, criterion4},
      {5, "consistency metric", 0.0, criterion5},
      {6, "determinism and cap", 0.0, criterion6},
      {7, "statistics shape", 0.0, criterion7},
      {8, "parse-render round trip", 0.0, criterion8},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(c.limit_s)) + " s limit)";
    }
    failures += !o.pass;
    std::printf("criterion %d [%s] %s: %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
