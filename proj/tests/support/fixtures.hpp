#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "contrastgen/scene_graph.hpp"

namespace testsupport {

// The zebra / wooden fence / puddle image ("zebra_scene"), plus one more image that
// puts "wall" into the vocabulary next to a puddle.
contrastgen::SceneGraphs zebra_scene_graphs();

// "Is there a fence near the puddle?" (yes) and
// "Is the puddle to the left of the zebra?" (yes), both on zebra_scene.
std::vector<contrastgen::QAPair> zebra_scene_questions();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const;

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::string& path);

}  // namespace testsupport
