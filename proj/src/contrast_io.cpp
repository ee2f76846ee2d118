#include "contrastgen/contrast_io.hpp"

#include <istream>
#include <ostream>

#include "contrastgen/error.hpp"
#include "contrastgen/text.hpp"
#include "json_util.hpp"

namespace contrastgen {

using detail::Json;

std::string perturbation_key(const std::string& question_id, std::size_t index) {
  return question_id + "#" + std::to_string(index);
}

std::string to_jsonl_line(const ContrastSet& set) {
  Json perturbations = Json::array();
  for (const auto& p : set.members) {
    perturbations.push_back(Json{{"question", p.perturbed_question},
                                 {"answer", p.perturbed_answer},
                                 {"template", to_string(p.kind)},
                                 {"replaced_atom", to_string(p.replaced_atom)},
                                 {"old", p.old_atom},
                                 {"new", p.new_atom}});
  }
  Json line{{"question_id", set.original.question_id},
            {"image_id", set.original.image_id},
            {"original", Json{{"question", set.original.question}, {"answer", set.original.answer}}},
            {"perturbations", std::move(perturbations)}};
  return line.dump();
}

void write_jsonl(std::ostream& out, const std::vector<ContrastSet>& sets) {
  for (const auto& s : sets) out << to_jsonl_line(s) << '\n';
}

namespace {

std::string required_string(const Json& j, const char* key, size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error("contrast file line " + std::to_string(line_no) + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

Atom parse_atom(const std::string& s, size_t line_no) {
  for (auto a : {Atom::ObjectX, Atom::ObjectY, Atom::Relation}) {
    if (to_string(a) == s) return a;
  }
  throw Error("contrast file line " + std::to_string(line_no) + ": unknown replaced_atom '" + s + "'");
}

}  // namespace

std::vector<ContrastSet> read_jsonl(std::istream& in) {
  std::vector<ContrastSet> sets;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw NotJson("contrast file line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object()) throw Error("contrast file line " + std::to_string(line_no) + ": not a JSON object");
    ContrastSet set;
    set.original.question_id = required_string(j, "question_id", line_no);
    set.original.image_id = required_string(j, "image_id", line_no);
    auto orig = j.find("original");
    if (orig == j.end() || !orig->is_object()) {
      throw Error("contrast file line " + std::to_string(line_no) + ": missing 'original' object");
    }
    set.original.question = required_string(*orig, "question", line_no);
    set.original.answer = required_string(*orig, "answer", line_no);
    auto perts = j.find("perturbations");
    if (perts == j.end() || !perts->is_array()) {
      throw Error("contrast file line " + std::to_string(line_no) + ": missing 'perturbations' array");
    }
    for (const auto& pj : *perts) {
      if (!pj.is_object()) throw Error("contrast file line " + std::to_string(line_no) + ": bad perturbation");
      Perturbation p;
      p.original = set.original;
      p.perturbed_question = required_string(pj, "question", line_no);
      p.perturbed_answer = required_string(pj, "answer", line_no);
      auto kind = parse_template_kind(required_string(pj, "template", line_no));
      if (!kind) throw Error("contrast file line " + std::to_string(line_no) + ": unknown template");
      p.kind = *kind;
      p.replaced_atom = parse_atom(required_string(pj, "replaced_atom", line_no), line_no);
      p.old_atom = required_string(pj, "old", line_no);
      p.new_atom = required_string(pj, "new", line_no);
      p.original.source = Source::Original;
      set.members.push_back(std::move(p));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

}  // namespace contrastgen
