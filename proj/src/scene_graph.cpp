#include "contrastgen/scene_graph.hpp"

#include <algorithm>
#include <sstream>

#include "contrastgen/text.hpp"
#include "json_util.hpp"

namespace contrastgen {

using detail::Json;

std::string to_string(ParseWarning::Kind kind) {
  switch (kind) {
    case ParseWarning::Kind::SchemaViolation: return "SchemaViolation";
    case ParseWarning::Kind::DanglingRelation: return "DanglingRelation";
    case ParseWarning::Kind::InvalidBox: return "InvalidBox";
    case ParseWarning::Kind::DuplicateKey: return "DuplicateKey";
  }
  return "Unknown";
}

std::string format_warning(const ParseWarning& w) {
  std::string out = to_string(w.kind) + "(" + w.entry;
  if (!w.path.empty()) out += ", " + w.path;
  out += ")";
  if (!w.message.empty()) out += ": " + w.message;
  return out;
}

namespace {

std::string join_path(const std::vector<std::string>& parts, const std::string& last) {
  std::string out;
  for (const auto& p : parts) out += p + "/";
  return out + last;
}

void report_duplicates(const detail::CheckedJson& parsed, std::vector<ParseWarning>& warnings) {
  for (const auto& hit : parsed.duplicates) {
    ParseWarning w{ParseWarning::Kind::DuplicateKey, {}, {}, "later entry wins"};
    if (hit.path.empty()) {
      w.entry = hit.key;
    } else {
      w.entry = hit.path.front();
      std::vector<std::string> rest(hit.path.begin() + 1, hit.path.end());
      w.path = join_path(rest, hit.key);
    }
    warnings.push_back(std::move(w));
  }
}

bool read_int(const Json& obj, const char* key, int& out) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) return false;
  out = it->get<int>();
  return true;
}

// Returns false (and records a warning) if the object must be skipped.
bool read_object(const std::string& image_id, const std::string& object_id, const Json& j,
                 SGObject& out, std::vector<ParseWarning>& warnings) {
  auto violation = [&](const std::string& field, const std::string& msg) {
    warnings.push_back({ParseWarning::Kind::SchemaViolation, image_id,
                        "objects/" + object_id + (field.empty() ? "" : "/" + field), msg});
    return false;
  };
  if (!j.is_object()) return violation("", "object entry is not a JSON object");
  auto name = j.find("name");
  if (name == j.end() || !name->is_string()) return violation("name", "missing or non-string name");
  out.name = text::normalize(name->get<std::string>());
  if (out.name.empty()) return violation("name", "empty name");
  for (const char* key : {"x", "y", "w", "h"}) {
    int value = 0;
    if (!read_int(j, key, value)) return violation(key, "missing or non-integer coordinate");
    switch (key[0]) {
      case 'x': out.x = value; break;
      case 'y': out.y = value; break;
      case 'w': out.w = value; break;
      default: out.h = value; break;
    }
  }
  if (auto attrs = j.find("attributes"); attrs != j.end()) {
    if (!attrs->is_array()) return violation("attributes", "attributes is not an array");
    for (const auto& a : *attrs) {
      if (!a.is_string()) return violation("attributes", "non-string attribute");
      auto value = text::normalize(a.get<std::string>());
      if (!value.empty()) out.attributes.insert(std::move(value));
    }
  }
  if (auto rels = j.find("relations"); rels != j.end()) {
    if (!rels->is_array()) return violation("relations", "relations is not an array");
    for (size_t i = 0; i < rels->size(); ++i) {
      const auto& r = (*rels)[i];
      auto rel_name = r.is_object() ? r.find("name") : r.end();
      auto rel_target = r.is_object() ? r.find("object") : r.end();
      if (!r.is_object() || rel_name == r.end() || !rel_name->is_string() || rel_target == r.end() ||
          !rel_target->is_string() || text::trim(rel_name->get<std::string>()).empty() ||
          rel_target->get<std::string>().empty()) {
        warnings.push_back({ParseWarning::Kind::SchemaViolation, image_id,
                            "objects/" + object_id + "/relations/" + std::to_string(i),
                            "malformed relation dropped"});
        continue;
      }
      out.relations.push_back({text::normalize(rel_name->get<std::string>()), rel_target->get<std::string>()});
    }
  }
  return true;
}

void check_box(const SceneGraph& g, const ObjectId& id, const SGObject& o, std::vector<ParseWarning>& warnings) {
  bool ok = o.x >= 0 && o.y >= 0 && o.w >= 0 && o.h >= 0 && static_cast<long>(o.x) + o.w <= g.width &&
            static_cast<long>(o.y) + o.h <= g.height;
  if (!ok) {
    std::ostringstream msg;
    msg << "box (" << o.x << "," << o.y << "," << o.w << "," << o.h << ") outside " << g.width << "x" << g.height
        << " image";
    warnings.push_back({ParseWarning::Kind::InvalidBox, g.image_id, "objects/" + id, msg.str()});
  }
}

std::optional<SceneGraph> read_graph(const std::string& image_id, const Json& j, std::vector<ParseWarning>& warnings) {
  auto violation = [&](const std::string& path, const std::string& msg) {
    warnings.push_back({ParseWarning::Kind::SchemaViolation, image_id, path, msg});
    return std::nullopt;
  };
  if (!j.is_object()) return violation("", "image entry is not a JSON object");
  SceneGraph g;
  g.image_id = image_id;
  if (!read_int(j, "width", g.width) || g.width <= 0) return violation("width", "width must be a positive integer");
  if (!read_int(j, "height", g.height) || g.height <= 0)
    return violation("height", "height must be a positive integer");
  auto objects = j.find("objects");
  if (objects == j.end() || !objects->is_object()) return violation("objects", "missing objects map");
  for (const auto& [id, obj_json] : objects->items()) {
    SGObject obj;
    if (read_object(image_id, id, obj_json, obj, warnings)) g.objects[id] = std::move(obj);
  }
  for (auto& [id, obj] : g.objects) {
    check_box(g, id, obj, warnings);
    std::erase_if(obj.relations, [&](const SGRelation& r) {
      if (g.objects.count(r.target)) return false;
      warnings.push_back({ParseWarning::Kind::DanglingRelation, image_id, "objects/" + id + "/relations",
                          "relation '" + r.predicate + "' targets unknown object '" + r.target + "'"});
      return true;
    });
  }
  return g;
}

}  // namespace

Parsed<SceneGraphs> parse_scene_graphs(std::istream& in) {
  auto parsed = detail::parse_checked(in);
  Parsed<SceneGraphs> out;
  report_duplicates(parsed, out.warnings);
  if (!parsed.value.is_object()) {
    out.warnings.push_back({ParseWarning::Kind::SchemaViolation, "", "", "top level is not a JSON object"});
    return out;
  }
  for (const auto& [image_id, entry] : parsed.value.items()) {
    if (auto g = read_graph(image_id, entry, out.warnings)) out.value[image_id] = std::move(*g);
  }
  return out;
}

Parsed<SceneGraphs> parse_scene_graphs(std::string_view json_text) {
  std::istringstream in{std::string(json_text)};
  return parse_scene_graphs(in);
}

std::string serialize_scene_graphs(const SceneGraphs& graphs) {
  Json root = Json::object();
  for (const auto& [image_id, g] : graphs) {
    Json objects = Json::object();
    for (const auto& [id, o] : g.objects) {
      Json rels = Json::array();
      for (const auto& r : o.relations) rels.push_back(Json{{"name", r.predicate}, {"object", r.target}});
      objects[id] = Json{{"name", o.name},
                         {"x", o.x},
                         {"y", o.y},
                         {"w", o.w},
                         {"h", o.h},
                         {"attributes", std::vector<std::string>(o.attributes.begin(), o.attributes.end())},
                         {"relations", std::move(rels)}};
    }
    root[image_id] = Json{{"width", g.width}, {"height", g.height}, {"objects", std::move(objects)}};
  }
  return root.dump();
}

Parsed<std::vector<QAPair>> parse_questions(std::istream& in) {
  auto parsed = detail::parse_checked(in);
  Parsed<std::vector<QAPair>> out;
  report_duplicates(parsed, out.warnings);
  if (!parsed.value.is_object()) {
    out.warnings.push_back({ParseWarning::Kind::SchemaViolation, "", "", "top level is not a JSON object"});
    return out;
  }
  for (const auto& [qid, entry] : parsed.value.items()) {
    auto field = [&](const char* key) -> std::optional<std::string> {
      if (!entry.is_object()) return std::nullopt;
      auto it = entry.find(key);
      if (it == entry.end() || !it->is_string()) return std::nullopt;
      auto value = std::string(text::trim(it->get<std::string>()));
      if (value.empty()) return std::nullopt;
      return value;
    };
    auto image = field("imageId");
    auto question = field("question");
    auto answer = field("answer");
    const char* missing = !image ? "imageId" : !question ? "question" : !answer ? "answer" : nullptr;
    if (missing) {
      out.warnings.push_back({ParseWarning::Kind::SchemaViolation, qid, missing, "missing or empty field"});
      continue;
    }
    out.value.push_back({qid, *image, *question, *answer, Source::Original});
  }
  return out;
}

Parsed<std::vector<QAPair>> parse_questions(std::string_view json_text) {
  std::istringstream in{std::string(json_text)};
  return parse_questions(in);
}

std::vector<ObjectId> objects_by_name(const SceneGraph& graph, std::string_view name) {
  const auto wanted = text::normalize(name);
  std::vector<ObjectId> ids;
  for (const auto& [id, obj] : graph.objects) {
    if (text::normalize(obj.name) == wanted) ids.push_back(id);
  }
  return ids;  // std::map iteration is already ascending
}

}  // namespace contrastgen
