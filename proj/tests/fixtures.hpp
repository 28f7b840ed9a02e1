#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_util.hpp"
#include "wrinkle/texture.hpp"
#include "wrinkle/wrinkles.hpp"

namespace fixture {

namespace fs = std::filesystem;
using wrinkle::Texture;

// In-memory copy of what write_identity put on disk.
struct IdentityData {
  std::string id;
  Texture neutral_albedo, neutral_disp;
  std::vector<wrinkle::ExpressionSample> samples;
};

// Writes PFM textures for one identity under dir/id and returns its config
// entry. With expressions == 0 the identity is a graft target.
inline nlohmann::json write_identity(const fs::path& dir, const std::string& id, std::mt19937_64& rng,
                                     int size, int expressions, IdentityData* data = nullptr) {
  const fs::path root = dir / id;
  fs::create_directories(root);
  const Texture na = testutil::random_texture(rng, size, size, 3, 0.2f, 0.8f);
  const Texture nd = testutil::random_texture(rng, size, size, 1, -0.1f, 0.1f);
  wrinkle::save_pfm(na, root / "neutral_albedo.pfm");
  wrinkle::save_pfm(nd, root / "neutral_disp.pfm");
  nlohmann::json entry = {{"id", id},
                          {"neutral_albedo", (root / "neutral_albedo.pfm").string()},
                          {"neutral_displacement", (root / "neutral_disp.pfm").string()},
                          {"expressions", nlohmann::json::array()}};
  if (data) *data = {id, na, nd, {}};
  for (int k = 0; k < expressions; ++k) {
    const std::string name = "expr" + std::to_string(k);
    wrinkle::ExpressionSample s{name, testutil::random_texture(rng, size, size, 3),
                                testutil::random_texture(rng, size, size, 1, -0.3f, 0.3f),
                                testutil::random_texture(rng, size, size, 1, -1.0f, 1.0f)};
    wrinkle::save_pfm(s.albedo, root / (name + "_albedo.pfm"));
    wrinkle::save_pfm(s.displacement, root / (name + "_disp.pfm"));
    wrinkle::save_pfm(s.tension_map, root / (name + "_tension.pfm"));
    entry["expressions"].push_back({{"name", name},
                                    {"albedo", (root / (name + "_albedo.pfm")).string()},
                                    {"displacement", (root / (name + "_disp.pfm")).string()},
                                    {"tension_map", (root / (name + "_tension.pfm")).string()}});
    if (data) data->samples.push_back(std::move(s));
  }
  return entry;
}

inline nlohmann::json base_config(const fs::path& out_dir) {
  return {{"beta", 10}, {"cleaning", {{"enabled", false}}}, {"output_dir", out_dir.string()},
          {"identities", nlohmann::json::array()}};
}

inline fs::path write_config(const fs::path& path, const nlohmann::json& config) {
  testutil::write_file(path, config.dump(2));
  return path;
}

}  // namespace fixture
