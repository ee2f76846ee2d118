#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "contrastgen/perturbation.hpp"

namespace contrastgen {

// One ContrastSet per line:
// {"question_id","image_id","original":{"question","answer"},
//  "perturbations":[{"question","answer","template","replaced_atom","old","new"}]}
std::string to_jsonl_line(const ContrastSet& set);
void write_jsonl(std::ostream& out, const std::vector<ContrastSet>& sets);

// Throws NotJson for an unparseable line and Error for a line missing fields.
std::vector<ContrastSet> read_jsonl(std::istream& in);

// Key under which predictions for perturbation `index` of a set are looked up.
std::string perturbation_key(const std::string& question_id, std::size_t index);

}  // namespace contrastgen
