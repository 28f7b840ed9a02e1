#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wrinkle/error.hpp"
#include "wrinkle/pipeline.hpp"

namespace wrinkle {

namespace {

using nlohmann::json;

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) throw ConfigError("empty path in config");
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::optional<fs::path> optional_path(const json& j, const char* key, const fs::path& base) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return resolve(base, j[key].get<std::string>());
}

}  // namespace

void PipelineConfig::validate() const {
  tension.validate();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be finite and > 0");
  if (resolution && *resolution < 1) throw ConfigError("resolution must be >= 1");
  if (!(cleaning.tau > 0.0)) throw ConfigError("cleaning.tau must be > 0");
  if (cleaning.dilate_px < 0) throw ConfigError("cleaning.dilate_px must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir must be non-empty");
  if (!std::isfinite(eval.failure_threshold)) throw ConfigError("eval.fr_threshold must be finite");
  std::set<std::string> ids;
  for (const auto& id : identities) {
    if (id.id.empty()) throw ConfigError("identity with empty id");
    if (id.id.find_first_of("/\\") != std::string::npos || id.id == "." || id.id == "..")
      throw ConfigError("identity id '" + id.id + "' is not a valid directory name");
    if (!ids.insert(id.id).second) throw ConfigError("duplicate identity id '" + id.id + "'");
    if (id.neutral_albedo.empty() || id.neutral_displacement.empty())
      throw ConfigError("identity '" + id.id + "': neutral texture paths must be non-empty");
    std::set<std::string> names;
    for (const auto& e : id.expressions) {
      if (e.name.empty()) throw ConfigError("identity '" + id.id + "': expression with empty name");
      if (!names.insert(e.name).second)
        throw ConfigError("identity '" + id.id + "': duplicate expression '" + e.name + "'");
      if (e.albedo.empty() || e.displacement.empty())
        throw ConfigError("identity '" + id.id + "', expression '" + e.name +
                          "': texture paths must be non-empty");
    }
  }
}

PipelineConfig parse_pipeline_config(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  PipelineConfig config;
  try {
    if (doc.contains("tension")) {
      const auto& t = doc["tension"];
      config.tension.strength = t.value("strength", config.tension.strength);
      config.tension.bias = t.value("bias", config.tension.bias);
      config.tension.expansion_iters = t.value("expansion_iters", config.tension.expansion_iters);
      config.tension.compression_iters = t.value("compression_iters", config.tension.compression_iters);
    }
    config.beta = doc.value("beta", config.beta);
    if (doc.contains("resolution") && !doc["resolution"].is_null())
      config.resolution = doc["resolution"].get<int>();
    if (doc.contains("cleaning")) {
      const auto& c = doc["cleaning"];
      config.cleaning.enabled = c.value("enabled", config.cleaning.enabled);
      config.cleaning.tau = c.value("tau", config.cleaning.tau);
      config.cleaning.dilate_px = c.value("dilate_px", config.cleaning.dilate_px);
      config.cleaning.coarse_mask = optional_path(c, "coarse_mask", base_dir);
    }
    if (doc.contains("output_dir"))
      config.output_dir = resolve(base_dir, doc["output_dir"].get<std::string>());
    else
      config.output_dir = base_dir / config.output_dir;
    if (doc.contains("donor_dirs"))
      for (const auto& d : doc["donor_dirs"])
        config.donor_dirs.push_back(resolve(base_dir, d.get<std::string>()));
    if (doc.contains("eval")) {
      const auto& e = doc["eval"];
      config.eval.failure_threshold = e.value("fr_threshold", config.eval.failure_threshold);
      if (e.contains("pairing")) config.eval.pairing = parse_lid_pairing(e["pairing"].get<std::string>());
      if (e.contains("eye_corners")) {
        const auto c = e["eye_corners"].get<std::vector<int>>();
        if (c.size() != 2) throw ConfigError("eval.eye_corners takes two indices");
        config.eval.eye_corners = std::pair{c[0], c[1]};
      }
    }
    if (doc.contains("identities")) {
      for (const auto& j : doc["identities"]) {
        IdentityEntry id;
        id.id = j.at("id").get<std::string>();
        id.neutral_albedo = resolve(base_dir, j.at("neutral_albedo").get<std::string>());
        id.neutral_displacement = resolve(base_dir, j.at("neutral_displacement").get<std::string>());
        id.raw_neutral_albedo = optional_path(j, "raw_neutral_albedo", base_dir);
        id.coarse_mask = optional_path(j, "coarse_mask", base_dir);
        id.neutral_mesh = optional_path(j, "neutral_mesh", base_dir);
        if (j.contains("expressions")) {
          for (const auto& e : j["expressions"]) {
            ExpressionEntry entry;
            entry.name = e.at("name").get<std::string>();
            entry.albedo = resolve(base_dir, e.at("albedo").get<std::string>());
            entry.displacement = resolve(base_dir, e.at("displacement").get<std::string>());
            entry.tension_map = optional_path(e, "tension_map", base_dir);
            entry.mesh = optional_path(e, "mesh", base_dir);
            id.expressions.push_back(std::move(entry));
          }
        }
        config.identities.push_back(std::move(id));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_pipeline_config(buffer.str(), path.parent_path());
}

}  // namespace wrinkle
