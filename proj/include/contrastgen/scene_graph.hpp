#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace contrastgen {

using ObjectId = std::string;
using ImageId = std::string;

struct SGRelation {
  std::string predicate;  // e.g. "to the left of", "near"
  ObjectId target;

  friend bool operator==(const SGRelation&, const SGRelation&) = default;
};

struct SGObject {
  std::string name;
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  std::set<std::string> attributes;
  std::vector<SGRelation> relations;

  // Twice the horizontal center, kept integral so midline tests are exact.
  long center_x2() const { return 2L * x + w; }

  friend bool operator==(const SGObject&, const SGObject&) = default;
};

struct SceneGraph {
  ImageId image_id;
  int width = 0;
  int height = 0;
  std::map<ObjectId, SGObject> objects;

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

using SceneGraphs = std::map<ImageId, SceneGraph>;

enum class Source { Original, Perturbed };

struct QAPair {
  std::string question_id;
  ImageId image_id;
  std::string question;
  std::string answer;
  Source source = Source::Original;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

// Non-fatal problems found while reading input. The offending entry (or only the
// offending relation) is skipped; the rest of the input is kept.
struct ParseWarning {
  enum class Kind {
    SchemaViolation,
    DanglingRelation,
    InvalidBox,
    DuplicateKey,
  };
  Kind kind = Kind::SchemaViolation;
  std::string entry;  // image id or question id
  std::string path;   // slash-separated location inside the entry
  std::string message;
};

std::string to_string(ParseWarning::Kind kind);
std::string format_warning(const ParseWarning& w);

template <class T>
struct Parsed {
  T value;
  std::vector<ParseWarning> warnings;
};

// GQA scene-graph layout. Throws NotJson if the stream does not parse at all.
Parsed<SceneGraphs> parse_scene_graphs(std::istream& in);
Parsed<SceneGraphs> parse_scene_graphs(std::string_view json_text);

std::string serialize_scene_graphs(const SceneGraphs& graphs);

// GQA question layout: {question_id: {imageId, question, answer, ...}}.
// Entries keep file order.
Parsed<std::vector<QAPair>> parse_questions(std::istream& in);
Parsed<std::vector<QAPair>> parse_questions(std::string_view json_text);

// Ids of objects whose normalized name equals normalize(name), ascending.
std::vector<ObjectId> objects_by_name(const SceneGraph& graph, std::string_view name);

}  // namespace contrastgen
