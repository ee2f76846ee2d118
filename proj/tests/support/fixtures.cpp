#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

namespace testsupport {

using namespace contrastgen;

SceneGraphs zebra_scene_graphs() {
  SceneGraph zebra_scene;
  zebra_scene.image_id = "zebra_scene";
  zebra_scene.width = 800;
  zebra_scene.height = 600;
  zebra_scene.objects["z"] = SGObject{"zebra", 420, 180, 300, 300, {"white", "black"}, {{"to the right of", "p"}}};
  zebra_scene.objects["f"] = SGObject{"fence", 0, 120, 800, 200, {"wooden", "brown"}, {}};
  zebra_scene.objects["p"] = SGObject{"puddle", 60, 450, 240, 100, {"brown"},
                               {{"to the left of", "z"}, {"near", "f"}}};

  SceneGraph other;
  other.image_id = "street";
  other.width = 640;
  other.height = 480;
  other.objects["1"] = SGObject{"wall", 0, 0, 640, 200, {"gray"}, {}};
  other.objects["2"] = SGObject{"puddle", 300, 380, 120, 60, {}, {{"near", "1"}}};
  return {{zebra_scene.image_id, zebra_scene}, {other.image_id, other}};
}

std::vector<QAPair> zebra_scene_questions() {
  return {
      QAPair{"zebra_near", "zebra_scene", "Is there a fence near the puddle?", "yes", Source::Original},
      QAPair{"zebra_rel", "zebra_scene", "Is the puddle to the left of the zebra?", "yes", Source::Original},
  };
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("contrastgen-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string TempDir::write(const std::string& name, const std::string& content) const {
  const auto p = file(name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testsupport
