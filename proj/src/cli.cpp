#include "wrinkle/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wrinkle/error.hpp"
#include "wrinkle/eval_manifest.hpp"
#include "wrinkle/log.hpp"
#include "wrinkle/parallel.hpp"
#include "wrinkle/pipeline.hpp"

namespace wrinkle {

namespace {

struct Options {
  std::string config_path;
  int jobs = 1;
  bool dry_run = false;
  bool json_log = false;

  // Overrides; flags win over the config file.
  std::optional<double> strength, bias, beta, tau;
  std::optional<int> expansion_iters, compression_iters, resolution, dilate_px;
  std::string out_dir;

  // Subcommand arguments.
  std::string mesh_a, mesh_b, values, texture, maps_dir, output, preview, values_out;
  std::string raw_neutral, clean_neutral, coarse_mask, fine_mask_out;
  std::string manifest;
  std::optional<std::string> pairing;
  std::optional<double> fr_threshold;
  std::vector<int> eye_corners;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return kExitConfig;
    case ErrorKind::data: return kExitData;
    case ErrorKind::io: return kExitIo;
  }
  return kExitData;
}

PipelineConfig effective_config(const Options& o, bool require_file) {
  PipelineConfig config;
  if (!o.config_path.empty())
    config = load_pipeline_config(o.config_path);
  else if (require_file)
    throw ConfigError("--config is required for this subcommand");
  if (o.strength) config.tension.strength = *o.strength;
  if (o.bias) config.tension.bias = *o.bias;
  if (o.expansion_iters) config.tension.expansion_iters = *o.expansion_iters;
  if (o.compression_iters) config.tension.compression_iters = *o.compression_iters;
  if (o.beta) config.beta = *o.beta;
  if (o.resolution) config.resolution = *o.resolution;
  if (o.tau) config.cleaning.tau = *o.tau;
  if (o.dilate_px) config.cleaning.dilate_px = *o.dilate_px;
  if (!o.out_dir.empty()) config.output_dir = o.out_dir;
  if (o.fr_threshold) config.eval.failure_threshold = *o.fr_threshold;
  if (o.pairing) config.eval.pairing = parse_lid_pairing(*o.pairing);
  if (!o.eye_corners.empty()) {
    if (o.eye_corners.size() != 2) throw ConfigError("--eye-corners takes two indices");
    config.eval.eye_corners = std::pair{o.eye_corners[0], o.eye_corners[1]};
  }
  config.validate();
  return config;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_parent(const fs::path& path) {
  const auto parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw IoError("cannot create " + parent.string() + ": " + ec.message());
}

void require_inputs(const std::vector<fs::path>& paths) {
  for (const auto& p : paths)
    if (!fs::is_regular_file(p)) throw IoError("missing input file " + p.string());
}

template <typename Fn>
auto in_stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  }
}

fs::path preview_path(const Options& o) {
  if (!o.preview.empty()) return o.preview;
  return fs::path(o.output).replace_extension(".png");
}

void write_baked(const Texture& baked, const Options& o) {
  in_stage("write", [&] {
    ensure_parent(o.output);
    save_pfm(baked, o.output);
    const auto png = preview_path(o);
    ensure_parent(png);
    save_png(tension_preview(baked), png);
  });
}

int cmd_tension(const Options& o) {
  const auto config = effective_config(o, false);
  const Mesh base = in_stage("load-mesh", [&] { return load_mesh(o.mesh_a); });
  const Mesh deformed = in_stage("load-mesh", [&] { return load_mesh(o.mesh_b); });
  const TensionField field = in_stage("tension", [&] {
    log::StageTimer timer("tension");
    return weighted_tension(base, deformed, config.tension);
  });
  const int resolution = config.resolution.value_or(512);
  if (!base.has_uvs()) throw DataError("bake: base mesh has no UV coordinates");
  if (o.dry_run) {
    std::printf("tension: %zu vertices, %zu edges, s=%g b=%g e=%d c=%d\n", base.vertex_count(),
                base.edge_count(), config.tension.strength, config.tension.bias,
                config.tension.expansion_iters, config.tension.compression_iters);
    std::printf("would write %s (%dx%d) and %s\n", o.output.c_str(), resolution, resolution,
                preview_path(o).c_str());
    return kExitOk;
  }
  const Texture baked = in_stage("bake", [&] {
    log::StageTimer timer("bake");
    return bake_tension(base, field, resolution);
  });
  write_baked(baked, o);
  if (!o.values_out.empty()) {
    in_stage("write", [&] {
      std::string text;
      char buf[64];
      for (const double v : field.values) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        text += buf;
      }
      ensure_parent(o.values_out);
      write_text(o.values_out, text);
    });
  }
  return kExitOk;
}

TensionField read_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  TensionField field;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double v = 0;
    if (!(ss >> v) || !std::isfinite(v)) throw ParseError(path.string(), line_no, "invalid value");
    field.values.push_back(v);
  }
  return field;
}

int cmd_bake(const Options& o) {
  const auto config = effective_config(o, false);
  const Mesh mesh = in_stage("load-mesh", [&] { return load_mesh(o.mesh_a); });
  const TensionField field = in_stage("load-values", [&] { return read_values(o.values); });
  const int resolution = config.resolution.value_or(512);
  if (o.dry_run) {
    std::printf("bake: %zu vertices, %zu values -> %s (%dx%d)\n", mesh.vertex_count(), field.size(),
                o.output.c_str(), resolution, resolution);
    return kExitOk;
  }
  const Texture baked = in_stage("bake", [&] { return bake_tension(mesh, field, resolution); });
  write_baked(baked, o);
  return kExitOk;
}

// Runs fn for every item in parallel, logs failures and returns the exit
// code of the lowest-index failure (0 if none).
template <typename Fn>
int run_identities(const std::vector<const IdentityEntry*>& items, int jobs, const char* what, Fn&& fn) {
  std::vector<int> codes(items.size(), kExitOk);
  parallel_for(items.size(), jobs, [&](std::size_t i) {
    try {
      fn(*items[i]);
    } catch (const Error& e) {
      log::error(what, e.what());
      codes[i] = exit_code(e.kind());
    } catch (const std::exception& e) {
      log::error(what, "identity " + items[i]->id + ": " + e.what());
      codes[i] = kExitIo;
    }
  });
  const auto failed = std::count_if(codes.begin(), codes.end(), [](int c) { return c != kExitOk; });
  if (failed > 0) {
    log::error(what, std::to_string(failed) + " of " + std::to_string(items.size()) + " identities failed");
    return *std::find_if(codes.begin(), codes.end(), [](int c) { return c != kExitOk; });
  }
  return kExitOk;
}

int cmd_build_maps(const Options& o) {
  const auto config = effective_config(o, true);
  std::vector<const IdentityEntry*> targets;
  for (const auto& id : config.identities)
    if (!id.expressions.empty()) targets.push_back(&id);
  if (targets.empty()) throw DataError("build-maps: no identities with expression scans");

  if (o.dry_run) {
    for (const auto* id : targets) require_inputs(identity_inputs(config, *id));
    for (const auto* id : targets)
      std::printf("build-maps: identity %s, %zu expression(s) -> %s\n", id->id.c_str(),
                  id->expressions.size(), (config.output_dir / id->id).c_str());
    return kExitOk;
  }
  log::StageTimer timer("build-maps", std::to_string(targets.size()) + " identities");
  return run_identities(targets, o.jobs, "build-maps", [&](const IdentityEntry& id) {
    const auto stored = build_identity_maps(config, id);
    in_stage(("identity " + id.id + ": stage write").c_str(),
             [&] { save_wrinkle_maps(stored, config.output_dir / id.id); });
  });
}

int cmd_graft(const Options& o) {
  const auto config = effective_config(o, true);
  std::vector<const IdentityEntry*> targets;
  for (const auto& id : config.identities)
    if (id.expressions.empty()) targets.push_back(&id);
  if (targets.empty()) {
    log::warn("graft", "no identities without expression scans; nothing to do");
    return kExitOk;
  }
  const auto donors = in_stage("load-donors", [&] { return load_donor_pool(config); });
  if (donors.empty()) throw DataError("graft: empty donor pool");

  if (o.dry_run) {
    for (const auto* id : targets) require_inputs(identity_inputs(config, *id));
    std::string pool;
    for (const auto& d : donors) pool += (pool.empty() ? "" : ", ") + d.identity;
    for (const auto* id : targets)
      std::printf("graft: identity %s from donor pool [%s] -> %s\n", id->id.c_str(), pool.c_str(),
                  (config.output_dir / id->id).c_str());
    return kExitOk;
  }
  return run_identities(targets, o.jobs, "graft", [&](const IdentityEntry& id) {
    const auto stored = graft_identity(id, donors);
    in_stage(("identity " + id.id + ": stage write").c_str(),
             [&] { save_wrinkle_maps(stored, config.output_dir / id.id); });
  });
}

int cmd_blend(const Options& o) {
  effective_config(o, false);
  const auto stored = in_stage("load-maps", [&] { return load_wrinkle_maps(o.maps_dir); });
  const Texture tension = in_stage("load-tension", [&] { return load_texture(o.texture); });
  if (o.dry_run) {
    require_same_size(tension, stored.maps.neutral_albedo, "blend");
    std::printf("blend: identity %s with %s -> %s/{albedo.pfm,albedo.png,displacement.pfm}\n",
                stored.identity.c_str(), o.texture.c_str(), o.output.c_str());
    return kExitOk;
  }
  const auto blended = in_stage("blend", [&] { return blend_at_synthesis(stored.maps, tension); });
  in_stage("write", [&] {
    const fs::path dir(o.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    save_pfm(blended.albedo, dir / "albedo.pfm");
    save_png(blended.albedo, dir / "albedo.png");
    save_pfm(blended.displacement, dir / "displacement.pfm");
  });
  return kExitOk;
}

int cmd_clean(const Options& o) {
  const auto config = effective_config(o, false);
  const Texture raw_expr = in_stage("load", [&] { return load_texture(o.texture); });
  const Texture raw_neutral = in_stage("load", [&] { return load_texture(o.raw_neutral); });
  const Texture clean_neutral = in_stage("load", [&] { return load_texture(o.clean_neutral); });
  MaskStack masks;
  masks.coarse = in_stage("load", [&] { return load_texture(o.coarse_mask); });
  masks.fine = in_stage("mask", [&] {
    return build_fine_mask(raw_neutral, clean_neutral, config.cleaning.tau, config.cleaning.dilate_px);
  });
  if (o.dry_run) {
    std::printf("clean: %s (tau=%g, dilate_px=%d) -> %s\n", o.texture.c_str(), config.cleaning.tau,
                config.cleaning.dilate_px, o.output.c_str());
    return kExitOk;
  }
  const Texture cleaned =
      in_stage("clean", [&] { return clean_expression_texture(raw_expr, clean_neutral, masks); });
  in_stage("write", [&] {
    ensure_parent(o.output);
    save_texture(cleaned, o.output);
    if (!o.fine_mask_out.empty()) {
      ensure_parent(o.fine_mask_out);
      save_png(masks.fine, o.fine_mask_out);
    }
  });
  return kExitOk;
}

int cmd_eval(const Options& o) {
  const EvalOptions options = effective_config(o, false).eval;
  const auto records = in_stage("load-manifest", [&] { return load_eval_manifest(o.manifest); });
  if (o.dry_run) {
    std::printf("eval: %zu record(s) -> %s.csv, %s.json\n", records.size(), o.output.c_str(),
                o.output.c_str());
    return kExitOk;
  }
  const auto report = in_stage("evaluate", [&] { return evaluate(records, options, o.jobs); });
  const std::string summary = report_summary_json(report);
  in_stage("write", [&] {
    ensure_parent(o.output + ".csv");
    write_text(o.output + ".csv", report_csv(report));
    write_text(o.output + ".json", summary);
  });
  std::fputs(summary.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Mesh-tension driven wrinkle map toolkit"};
  app.name("wrinkle");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--config", o.config_path, "Pipeline config (JSON)");
  app.add_option("--jobs", o.jobs, "Parallel identities/records")->check(CLI::PositiveNumber);
  app.add_flag("--dry-run", o.dry_run, "Validate inputs and print the plan without writing");
  app.add_flag("--json-log", o.json_log, "Log to stderr as JSON lines");
  app.add_option("--strength", o.strength, "Tension strength s");
  app.add_option("--bias", o.bias, "Tension bias b");
  app.add_option("--expansion-iters", o.expansion_iters, "Expansion dilation (>0) / erosion (<0) rounds");
  app.add_option("--compression-iters", o.compression_iters, "Compression dilation (>0) / erosion (<0) rounds");
  app.add_option("--beta", o.beta, "Softmax temperature for wrinkle-map weights");
  app.add_option("--resolution", o.resolution, "Bake resolution (texels per side)");
  app.add_option("--tau", o.tau, "Fine-mask threshold in standard deviations");
  app.add_option("--dilate-px", o.dilate_px, "Fine-mask dilation rounds");
  app.add_option("--out", o.out_dir, "Output directory for build-maps/graft");

  auto* tension = app.add_subcommand("tension", "Compute and bake tension between two meshes");
  tension->add_option("base", o.mesh_a, "Base (neutral) OBJ")->required();
  tension->add_option("deformed", o.mesh_b, "Deformed OBJ")->required();
  tension->add_option("-o,--output", o.output, "Baked tension PFM")->required();
  tension->add_option("--preview", o.preview, "PNG preview (default: output with .png)");
  tension->add_option("--values", o.values_out, "Write per-vertex tension values (text)");

  auto* bake = app.add_subcommand("bake", "Bake per-vertex values into UV space");
  bake->add_option("mesh", o.mesh_a, "Mesh with UVs (OBJ)")->required();
  bake->add_option("values", o.values, "Per-vertex values, one per line")->required();
  bake->add_option("-o,--output", o.output, "Baked PFM")->required();
  bake->add_option("--preview", o.preview, "PNG preview (default: output with .png)");

  auto* build = app.add_subcommand("build-maps", "Build wrinkle maps for identities with expression scans");
  auto* graft = app.add_subcommand("graft", "Graft wrinkle maps onto identities without scans");

  auto* blend = app.add_subcommand("blend", "Blend wrinkle maps with a baked tension texture");
  blend->add_option("maps", o.maps_dir, "Wrinkle map directory")->required();
  blend->add_option("tension", o.texture, "Baked tension texture")->required();
  blend->add_option("-o,--output", o.output, "Output directory")->required();

  auto* clean = app.add_subcommand("clean", "Remove scan artifacts from an expression texture");
  clean->add_option("raw", o.texture, "Raw expression texture")->required();
  clean->add_option("--raw-neutral", o.raw_neutral, "Raw neutral texture")->required();
  clean->add_option("--clean-neutral", o.clean_neutral, "Manually cleaned neutral texture")->required();
  clean->add_option("--coarse-mask", o.coarse_mask, "Identity-agnostic coarse mask")->required();
  clean->add_option("-o,--output", o.output, "Cleaned texture")->required();
  clean->add_option("--fine-mask-out", o.fine_mask_out, "Write the fine artifact mask (PNG)");

  auto* eval = app.add_subcommand("eval", "Evaluate landmark predictions");
  eval->add_option("manifest", o.manifest, "Evaluation manifest (JSON)")->required();
  eval->add_option("-o,--output", o.output, "Report path prefix (.csv and .json)")->required();
  eval->add_option("--fr-threshold", o.fr_threshold, "Failure threshold on NME (percent)");
  eval->add_option("--pairing", o.pairing, "Eyelid pairing: index | nearest-x");
  eval->add_option("--eye-corners", o.eye_corners, "Outer eye-corner indices for interocular distance")
      ->expected(2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  log::set_json(o.json_log);
  try {
    if (*tension) return cmd_tension(o);
    if (*bake) return cmd_bake(o);
    if (*build) return cmd_build_maps(o);
    if (*graft) return cmd_graft(o);
    if (*blend) return cmd_blend(o);
    if (*clean) return cmd_clean(o);
    if (*eval) return cmd_eval(o);
  } catch (const Error& e) {
    log::error(app.get_subcommands().front()->get_name(), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    log::error(app.get_subcommands().front()->get_name(), e.what());
    return kExitIo;
  }
  return kExitConfig;
}

}  // namespace wrinkle
