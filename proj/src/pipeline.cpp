#include <algorithm>
#include <functional>

#include "wrinkle/error.hpp"
#include "wrinkle/log.hpp"
#include "wrinkle/pipeline.hpp"

namespace wrinkle {

namespace {

// Runs fn, prefixing any library error with identity and stage names.
template <typename Fn>
auto stage(const std::string& identity, const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), "identity " + identity + ": stage " + name + ": " + e.what());
  }
}

std::optional<fs::path> coarse_mask_path(const PipelineConfig& config, const IdentityEntry& id) {
  return id.coarse_mask ? id.coarse_mask : config.cleaning.coarse_mask;
}

bool cleaning_active(const PipelineConfig& config, const IdentityEntry& id) {
  return config.cleaning.enabled && id.raw_neutral_albedo.has_value();
}

}  // namespace

std::vector<fs::path> identity_inputs(const PipelineConfig& config, const IdentityEntry& id) {
  std::vector<fs::path> inputs{id.neutral_albedo, id.neutral_displacement};
  if (id.expressions.empty()) return inputs;
  if (cleaning_active(config, id)) {
    inputs.push_back(*id.raw_neutral_albedo);
    if (const auto mask = coarse_mask_path(config, id)) inputs.push_back(*mask);
  }
  if (id.neutral_mesh) inputs.push_back(*id.neutral_mesh);
  for (const auto& e : id.expressions) {
    inputs.push_back(e.albedo);
    inputs.push_back(e.displacement);
    if (e.tension_map)
      inputs.push_back(*e.tension_map);
    else if (e.mesh)
      inputs.push_back(*e.mesh);
  }
  return inputs;
}

StoredMaps build_identity_maps(const PipelineConfig& config, const IdentityEntry& id) {
  log::StageTimer timer("build-maps", "identity " + id.id);
  if (id.expressions.empty())
    throw DataError("identity " + id.id + ": no expression scans (use graft)");

  const Texture neutral_albedo = stage(id.id, "load-neutral", [&] { return load_texture(id.neutral_albedo); });
  const Texture neutral_disp = stage(id.id, "load-neutral", [&] { return load_texture(id.neutral_displacement); });
  stage(id.id, "load-neutral", [&] {
    if (neutral_albedo.channels() != 3) throw DimensionError("neutral albedo must be RGB");
    if (neutral_disp.channels() != 1) throw DimensionError("neutral displacement must be 1-channel");
    require_same_size(neutral_albedo, neutral_disp, "neutral textures");
  });

  std::optional<MaskStack> masks;
  if (cleaning_active(config, id)) {
    masks = stage(id.id, "clean-mask", [&] {
      const auto mask_path = coarse_mask_path(config, id);
      if (!mask_path) throw ConfigError("cleaning enabled but no coarse mask configured");
      MaskStack m;
      m.coarse = load_texture(*mask_path);
      if (m.coarse.channels() != 1) throw DimensionError("coarse mask must be grayscale");
      require_same_size(m.coarse, neutral_albedo, "coarse mask");
      const Texture raw_neutral = load_texture(*id.raw_neutral_albedo);
      m.fine = build_fine_mask(raw_neutral, neutral_albedo, config.cleaning.tau, config.cleaning.dilate_px);
      return m;
    });
  }

  std::optional<Mesh> neutral_mesh;
  std::vector<ExpressionSample> samples;
  samples.reserve(id.expressions.size());
  for (const auto& e : id.expressions) {
    const std::string where = "expression " + e.name;
    ExpressionSample s;
    s.name = e.name;
    s.albedo = stage(id.id, "load-expression", [&] { return load_texture(e.albedo); });
    s.displacement = stage(id.id, "load-expression", [&] { return load_texture(e.displacement); });
    if (masks) {
      stage(id.id, "clean", [&] {
        s.albedo = clean_expression_texture(s.albedo, neutral_albedo, *masks);
        s.displacement = clean_expression_texture(s.displacement, neutral_disp, *masks);
      });
    }
    s.tension_map = stage(id.id, "tension", [&]() -> Texture {
      if (e.tension_map) return load_texture(*e.tension_map);
      if (!e.mesh)
        throw DataError(where + ": missing expression tension map (no tension_map or mesh given)");
      if (!id.neutral_mesh) throw DataError(where + ": expression mesh given but no neutral_mesh");
      if (!neutral_mesh) neutral_mesh = load_mesh(*id.neutral_mesh);
      const Mesh expr_mesh = load_mesh(*e.mesh);
      const int resolution = config.resolution.value_or(neutral_albedo.width());
      return bake_tension(*neutral_mesh, weighted_tension(*neutral_mesh, expr_mesh, config.tension),
                          resolution);
    });
    samples.push_back(std::move(s));
  }

  StoredMaps stored;
  stored.identity = id.id;
  stored.beta = config.beta;
  stored.maps = stage(id.id, "build-maps", [&] {
    return build_wrinkle_maps(neutral_albedo, neutral_disp, samples, config.beta);
  });
  return stored;
}

std::vector<Donor> load_donor_pool(const PipelineConfig& config) {
  std::vector<Donor> donors;
  for (const auto& id : config.identities) {
    if (id.expressions.empty()) continue;
    const auto dir = config.output_dir / id.id;
    if (!fs::exists(dir / "manifest.json")) {
      log::warn("graft", "donor " + id.id + " has no built maps in " + dir.string() + "; skipped");
      continue;
    }
    auto stored = load_wrinkle_maps(dir);
    donors.push_back({stored.identity, std::move(stored.maps)});
  }
  for (const auto& dir : config.donor_dirs) {
    auto stored = load_wrinkle_maps(dir);
    donors.push_back({stored.identity, std::move(stored.maps)});
  }
  return donors;
}

StoredMaps graft_identity(const IdentityEntry& id,
                          std::span<const Donor> donors) {
  log::StageTimer timer("graft", "identity " + id.id);
  const Texture albedo = stage(id.id, "load-neutral", [&] { return load_texture(id.neutral_albedo); });
  const Texture disp = stage(id.id, "load-neutral", [&] { return load_texture(id.neutral_displacement); });
  auto result = stage(id.id, "graft", [&] { return graft_wrinkles(albedo, disp, donors); });
  log::info("graft", "identity " + id.id + ": donor " + result.donor + " (neutral albedo mse " +
                         std::to_string(result.donor_mse) + ")");
  StoredMaps stored;
  stored.identity = id.id;
  stored.grafted_from = result.donor;
  stored.maps = std::move(result.maps);
  return stored;
}

}  // namespace wrinkle
