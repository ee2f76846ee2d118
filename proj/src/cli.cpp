#include "contrastgen/cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "contrastgen/contrast_io.hpp"
#include "contrastgen/error.hpp"
#include "contrastgen/grounding.hpp"
#include "contrastgen/metrics.hpp"
#include "contrastgen/oracle.hpp"
#include "contrastgen/perturbation.hpp"
#include "contrastgen/text.hpp"

namespace contrastgen {

namespace {

struct RunConfig {
  std::string log_level;
  unsigned worker_count = 1;

  // generate / oracle
  std::string graphs_path;
  std::string questions_path;
  std::string lexicon_path;
  std::string templates;
  std::string out_path;
  std::string warnings_path;
  int max_aug = 1;
  std::uint64_t seed = 0;
  double similarity_threshold = 0.1;
  int candidate_pool = 20;
  bool no_geometry_fallback = false;

  // stats / evaluate
  std::string contrast_path;
  std::string predictions_path;
  bool by_template = false;
  bool json = false;

  // oracle
  std::string question;
  std::string image;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file '" + path + "'");
  return in;
}

Lexicon lexicon_from(const RunConfig& rc) {
  if (rc.lexicon_path.empty()) return default_lexicon();
  auto in = open_input(rc.lexicon_path);
  return load_lexicon(in);
}

std::set<TemplateKind> templates_from(const std::string& list) {
  std::set<TemplateKind> kinds;
  if (list.empty()) return {kAllTemplateKinds.begin(), kAllTemplateKinds.end()};
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    auto kind = parse_template_kind(item);
    if (!kind) throw Error("unknown template '" + std::string(text::trim(item)) + "'");
    kinds.insert(*kind);
  }
  return kinds;
}

std::vector<QAPair> load_questions(const std::string& path, spdlog::logger& log, std::vector<std::string>& warnings) {
  auto in = open_input(path);
  auto parsed = parse_questions(in);
  for (const auto& w : parsed.warnings) {
    warnings.push_back(format_warning(w));
    log.warn("{}: {}", path, warnings.back());
  }
  return std::move(parsed.value);
}

SceneGraphs load_graphs(const std::string& path, spdlog::logger& log, std::vector<std::string>& warnings) {
  auto in = open_input(path);
  auto parsed = parse_scene_graphs(in);
  for (const auto& w : parsed.warnings) {
    warnings.push_back(format_warning(w));
    log.warn("{}: {}", path, warnings.back());
  }
  return std::move(parsed.value);
}

int cmd_generate(const RunConfig& rc, std::ostream& out, std::ostream& err, spdlog::logger& log) {
  GenConfig cfg;
  cfg.max_aug = rc.max_aug;
  cfg.seed = rc.seed;
  cfg.similarity_threshold = rc.similarity_threshold;
  cfg.candidate_pool = std::max(rc.candidate_pool, rc.max_aug);
  cfg.geometry_fallback = !rc.no_geometry_fallback;
  cfg.active_templates = templates_from(rc.templates);
  cfg.validate();

  const Lexicon lex = lexicon_from(rc);
  std::vector<std::string> warnings;
  const auto graphs = load_graphs(rc.graphs_path, log, warnings);
  const auto questions = load_questions(rc.questions_path, log, warnings);
  log.info("loaded {} scene graphs and {} questions", graphs.size(), questions.size());

  const auto cooc = build_cooccurrence(graphs);
  auto result = generate(questions, graphs, cooc, lex, cfg, rc.worker_count);
  for (const auto& w : result.warnings) {
    log.warn("{}", w);
    warnings.push_back(w);
  }

  auto failures = verify(result.sets, graphs, lex, cfg.oracle_options());
  if (!failures.empty()) {
    for (const auto& f : failures) {
      err << "verification failed for " << f.question_id << ": \"" << f.perturbed_question << "\": " << f.reason
          << '\n';
    }
    return kExitVerificationFailed;
  }

  if (rc.out_path.empty()) {
    write_jsonl(out, result.sets);
  } else {
    std::ofstream file(rc.out_path, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + rc.out_path + "'");
    write_jsonl(file, result.sets);
  }
  if (!rc.warnings_path.empty()) {
    std::ofstream file(rc.warnings_path, std::ios::binary);
    if (!file) throw Error("cannot open warnings file '" + rc.warnings_path + "'");
    for (const auto& w : warnings) file << w << '\n';
  }
  log.info("{} contrast sets, {} perturbed pairs, {} warnings", result.stats.contrast_sets, result.stats.aug_pairs,
           warnings.size());
  return kExitOk;
}

int cmd_stats(const RunConfig& rc, std::ostream& out, spdlog::logger& log) {
  auto contrast = open_input(rc.contrast_path);
  const auto sets = read_jsonl(contrast);
  std::vector<std::string> warnings;
  const auto questions = load_questions(rc.questions_path, log, warnings);
  const auto stats = compute_stats(sets, questions);
  out << (rc.json ? stats_to_json(stats) + "\n" : format_stats(stats));
  return kExitOk;
}

int cmd_evaluate(const RunConfig& rc, std::ostream& out) {
  auto contrast = open_input(rc.contrast_path);
  const auto sets = read_jsonl(contrast);
  auto preds_in = open_input(rc.predictions_path);
  const auto preds = load_predictions(preds_in);
  const auto report = evaluate(sets, preds);
  out << (rc.json ? report_to_json(report) + "\n" : format_report(report, rc.by_template));
  return kExitOk;
}

int cmd_oracle(const RunConfig& rc, std::ostream& out, std::ostream& err, spdlog::logger& log) {
  const Lexicon lex = lexicon_from(rc);
  std::vector<std::string> warnings;
  const auto graphs = load_graphs(rc.graphs_path, log, warnings);
  auto git = graphs.find(rc.image);
  if (git == graphs.end()) throw Error("no scene graph for image '" + rc.image + "'");
  QAPair q{"cli", rc.image, rc.question, "?", Source::Original};
  auto matches = match_template(q);
  if (matches.empty()) {
    err << "question matches none of the templates\n";
    return kExitInputError;
  }
  OracleOptions opts{!rc.no_geometry_fallback};
  int status = kExitOk;
  for (const auto& m : matches) {
    out << to_string(m.kind) << "\tX=\"" << m.x << "\"";
    if (m.y) out << "\tY=\"" << *m.y << "\"";
    if (m.rel) out << "\tRel=" << *m.rel;
    try {
      auto a = answer(m, git->second, lex, opts);
      out << "\tanswer=" << a.value << "\tconfident=" << (a.confident ? "true" : "false") << '\n';
    } catch (const Unanswerable& e) {
      out << "\tunanswerable: " << e.what() << '\n';
      status = kExitInputError;
    }
  }
  return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  if (const char* env = std::getenv("CONTRASTGEN_LOG")) rc.log_level = env;

  CLI::App app{"Generate and evaluate scene-graph contrast sets for visual question answering", "contrastgen"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_option("--log-level", rc.log_level, "trace|debug|info|warn|error|off (env CONTRASTGEN_LOG)");

  auto* gen = app.add_subcommand("generate", "Generate contrast sets as JSON Lines");
  gen->add_option("--graphs", rc.graphs_path, "Scene-graph JSON file")->required();
  gen->add_option("--questions", rc.questions_path, "Question JSON file")->required();
  gen->add_option("--max-aug", rc.max_aug, "Maximum perturbations per question")
      ->check(CLI::IsMember({1, 3, 5}));
  gen->add_option("--seed", rc.seed, "Random seed");
  gen->add_option("--lexicon", rc.lexicon_path, "Lexicon JSON file (default: built-in)");
  gen->add_option("--templates", rc.templates, "Comma-separated template names to enable");
  gen->add_option("--out", rc.out_path, "Output JSONL file (default: stdout)");
  gen->add_option("--warnings", rc.warnings_path, "Write warnings to this file");
  gen->add_option("--workers", rc.worker_count, "Worker threads")->check(CLI::PositiveNumber);
  gen->add_option("--similarity-threshold", rc.similarity_threshold, "Minimum trigram similarity")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--candidate-pool", rc.candidate_pool, "Top-ranked candidates sampled from")
      ->check(CLI::PositiveNumber);
  gen->add_flag("--no-geometry-fallback", rc.no_geometry_fallback, "Decide left/right from relation edges only");

  auto* stats = app.add_subcommand("stats", "Augmentation statistics for a contrast file");
  stats->add_option("--contrast", rc.contrast_path, "Contrast JSONL file")->required();
  stats->add_option("--questions", rc.questions_path, "Source question JSON file")->required();
  stats->add_flag("--json", rc.json, "Print JSON instead of a table");

  auto* eval = app.add_subcommand("evaluate", "Accuracy and consistency of a prediction file");
  eval->add_option("--contrast", rc.contrast_path, "Contrast JSONL file")->required();
  eval->add_option("--predictions", rc.predictions_path, "Prediction JSON file")->required();
  eval->add_flag("--by-template", rc.by_template, "Add a per-template breakdown");
  eval->add_flag("--json", rc.json, "Print JSON instead of a table");

  auto* orc = app.add_subcommand("oracle", "Answer one question against a scene graph");
  orc->add_option("--graphs", rc.graphs_path, "Scene-graph JSON file")->required();
  orc->add_option("--question", rc.question, "Question text")->required();
  orc->add_option("--image", rc.image, "Image id")->required();
  orc->add_option("--lexicon", rc.lexicon_path, "Lexicon JSON file (default: built-in)");
  orc->add_flag("--no-geometry-fallback", rc.no_geometry_fallback, "Decide left/right from relation edges only");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  spdlog::logger log("contrastgen", sink);
  log.set_pattern("[%l] %v");
  log.set_level(rc.log_level.empty() ? spdlog::level::warn : spdlog::level::from_str(rc.log_level));

  try {
    if (gen->parsed()) return cmd_generate(rc, out, err, log);
    if (stats->parsed()) return cmd_stats(rc, out, log);
    if (eval->parsed()) return cmd_evaluate(rc, out);
    if (orc->parsed()) return cmd_oracle(rc, out, err, log);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace contrastgen
