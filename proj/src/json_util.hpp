#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace contrastgen::detail {

using Json = nlohmann::ordered_json;

struct DuplicateKeyHit {
  std::vector<std::string> path;  // enclosing keys, outermost first
  std::string key;
  // Serialized scalar values of the first and second occurrence; empty when
  // either value is an object or array.
  std::string first_value;
  std::string second_value;
};

struct CheckedJson {
  Json value;
  std::vector<DuplicateKeyHit> duplicates;
};

// Parses a whole stream, recording object keys that appear twice in the same
// object. Throws NotJson on syntax errors.
CheckedJson parse_checked(std::istream& in);

}  // namespace contrastgen::detail
