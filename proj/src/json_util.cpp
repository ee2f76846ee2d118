#include "json_util.hpp"

#include <istream>
#include <map>
#include <set>

#include "contrastgen/error.hpp"

namespace contrastgen::detail {

CheckedJson parse_checked(std::istream& in) {
  struct Frame {
    bool is_object = false;
    std::set<std::string> seen;
    std::string current_key;
    std::map<std::string, std::string> scalars;
    long pending_duplicate = -1;
  };
  std::vector<Frame> stack;
  std::vector<DuplicateKeyHit> duplicates;

  auto enclosing_path = [&] {
    std::vector<std::string> path;
    for (size_t i = 0; i + 1 < stack.size(); ++i) {
      if (stack[i].is_object) path.push_back(stack[i].current_key);
    }
    return path;
  };

  Json::parser_callback_t cb = [&](int /*depth*/, Json::parse_event_t event, Json& parsed) {
    using E = Json::parse_event_t;
    switch (event) {
      case E::object_start:
        stack.push_back(Frame{true, {}, {}, {}, -1});
        break;
      case E::array_start:
        stack.push_back(Frame{false, {}, {}, {}, -1});
        break;
      case E::object_end:
      case E::array_end:
        if (!stack.empty()) stack.pop_back();
        break;
      case E::key: {
        auto& top = stack.back();
        std::string key = parsed.get<std::string>();
        top.pending_duplicate = -1;
        if (!top.seen.insert(key).second) {
          auto prev = top.scalars.find(key);
          duplicates.push_back({enclosing_path(), key, prev == top.scalars.end() ? "" : prev->second, ""});
          top.pending_duplicate = static_cast<long>(duplicates.size()) - 1;
        }
        top.current_key = std::move(key);
        break;
      }
      case E::value:
        if (!stack.empty() && stack.back().is_object) {
          auto& top = stack.back();
          if (top.pending_duplicate >= 0) {
            duplicates[static_cast<size_t>(top.pending_duplicate)].second_value = parsed.dump();
            top.pending_duplicate = -1;
          } else {
            top.scalars[top.current_key] = parsed.dump();
          }
        }
        break;
    }
    return true;
  };

  CheckedJson out;
  try {
    out.value = Json::parse(in, cb);
  } catch (const Json::parse_error& e) {
    throw NotJson(e.what());
  }
  out.duplicates = std::move(duplicates);
  return out;
}

}  // namespace contrastgen::detail
