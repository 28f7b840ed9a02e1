#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wrinkle/cleaning.hpp"
#include "wrinkle/eval_manifest.hpp"
#include "wrinkle/map_store.hpp"
#include "wrinkle/tension.hpp"

namespace wrinkle {

namespace fs = std::filesystem;

struct ExpressionEntry {
  std::string name;
  fs::path albedo;
  fs::path displacement;
  std::optional<fs::path> tension_map;  // pre-baked tension texture, or
  std::optional<fs::path> mesh;         // fitted expression mesh baked against neutral_mesh
};

struct IdentityEntry {
  std::string id;
  fs::path neutral_albedo;        // manually cleaned
  fs::path neutral_displacement;  // manually cleaned
  std::optional<fs::path> raw_neutral_albedo;  // enables automatic cleaning
  std::optional<fs::path> coarse_mask;         // overrides the global coarse mask
  std::optional<fs::path> neutral_mesh;
  std::vector<ExpressionEntry> expressions;    // empty: graft target
};

struct CleaningConfig {
  bool enabled = true;
  double tau = kDefaultMaskTau;
  int dilate_px = kDefaultMaskDilation;
  std::optional<fs::path> coarse_mask;
};

// Config file (JSON). Relative paths resolve against the config's directory.
//
//   { "tension": { "strength": 10, "bias": 0, "expansion_iters": 0, "compression_iters": 0 },
//     "beta": 10,
//     "resolution": 1024,
//     "cleaning": { "enabled": true, "tau": 3, "dilate_px": 2, "coarse_mask": "coarse.png" },
//     "output_dir": "maps",
//     "eval": { "fr_threshold": 10, "pairing": "index" | "nearest-x", "eye_corners": [36, 45] },
//     "donor_dirs": ["other_maps/id07"],
//     "identities": [
//       { "id": "id01", "neutral_albedo": "...", "neutral_displacement": "...",
//         "raw_neutral_albedo": "...", "neutral_mesh": "...",
//         "expressions": [ { "name": "smile", "albedo": "...", "displacement": "...",
//                            "tension_map": "..." | "mesh": "..." } ] } ] }
struct PipelineConfig {
  TensionParams tension;
  double beta = kDefaultSoftmaxBeta;
  std::optional<int> resolution;  // bake size; defaults to the texture width
  CleaningConfig cleaning;
  fs::path output_dir = "wrinkle_maps";
  std::vector<fs::path> donor_dirs;
  std::vector<IdentityEntry> identities;
  EvalOptions eval;

  // Throws ConfigError on out-of-range values, empty paths or duplicate ids.
  void validate() const;
};

PipelineConfig parse_pipeline_config(std::string_view json_text, const fs::path& base_dir);
PipelineConfig load_pipeline_config(const fs::path& path);

// Every input file an identity needs for build-maps (or graft, if it has no
// expressions).
std::vector<fs::path> identity_inputs(const PipelineConfig& config, const IdentityEntry& identity);

// Loads, cleans and bakes one identity's expression data and builds its maps.
// Errors are rethrown with the identity and failing stage in the message.
StoredMaps build_identity_maps(const PipelineConfig& config, const IdentityEntry& identity);

// Loads the donor pool: built map directories of identities with expressions
// under output_dir, plus any configured donor_dirs.
std::vector<Donor> load_donor_pool(const PipelineConfig& config);

StoredMaps graft_identity(const IdentityEntry& identity,
                          std::span<const Donor> donors);

}  // namespace wrinkle
