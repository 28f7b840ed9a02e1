#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "wrinkle/wrinkles.hpp"

namespace wrinkle {

// On-disk layout of a wrinkle map set:
//
//   <dir>/manifest.json
//   <dir>/neutral_albedo.pfm    <dir>/neutral_disp.pfm
//   <dir>/expanded_albedo.pfm   <dir>/expanded_disp.pfm
//   <dir>/compressed_albedo.pfm <dir>/compressed_disp.pfm
//
// manifest.json (version 1):
//   { "version": 1, "identity": "<id>", "beta": <double or null>,
//     "grafted_from": "<id>" (optional),
//     "maps": { "neutral_albedo": "neutral_albedo.pfm", ... } }
//
// Map file names are resolved relative to the directory; readers accept any
// .pfm/.png name listed in the manifest.
inline constexpr int kMapManifestVersion = 1;

struct StoredMaps {
  std::string identity;
  std::optional<double> beta;
  std::optional<std::string> grafted_from;
  WrinkleMapSet maps;
};

void save_wrinkle_maps(const StoredMaps& stored, const std::filesystem::path& dir);
StoredMaps load_wrinkle_maps(const std::filesystem::path& dir);

}  // namespace wrinkle
