#include "wrinkle/map_store.hpp"

#include <array>
#include <fstream>
#include <utility>

#include <json.hpp>

#include "wrinkle/error.hpp"

namespace wrinkle {

namespace {

using MapMember = Texture WrinkleMapSet::*;

constexpr std::array<std::pair<const char*, MapMember>, 6> kMapFields{{
    {"neutral_albedo", &WrinkleMapSet::neutral_albedo},
    {"expanded_albedo", &WrinkleMapSet::expanded_albedo},
    {"compressed_albedo", &WrinkleMapSet::compressed_albedo},
    {"neutral_disp", &WrinkleMapSet::neutral_disp},
    {"expanded_disp", &WrinkleMapSet::expanded_disp},
    {"compressed_disp", &WrinkleMapSet::compressed_disp},
}};

}  // namespace

void save_wrinkle_maps(const StoredMaps& stored, const std::filesystem::path& dir) {
  stored.maps.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  nlohmann::ordered_json manifest;
  manifest["version"] = kMapManifestVersion;
  manifest["identity"] = stored.identity;
  manifest["beta"] = stored.beta ? nlohmann::ordered_json(*stored.beta) : nullptr;
  if (stored.grafted_from) manifest["grafted_from"] = *stored.grafted_from;
  for (const auto& [name, member] : kMapFields) {
    const std::string file = std::string(name) + ".pfm";
    save_pfm(stored.maps.*member, dir / file);
    manifest["maps"][name] = file;
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + (dir / "manifest.json").string());
}

StoredMaps load_wrinkle_maps(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open " + manifest_path.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }

  StoredMaps stored;
  try {
    const int version = manifest.at("version").get<int>();
    if (version != kMapManifestVersion)
      throw DataError(manifest_path.string() + ": unsupported manifest version " +
                      std::to_string(version));
    stored.identity = manifest.at("identity").get<std::string>();
    if (manifest.contains("beta") && !manifest["beta"].is_null())
      stored.beta = manifest["beta"].get<double>();
    if (manifest.contains("grafted_from"))
      stored.grafted_from = manifest["grafted_from"].get<std::string>();
    const auto& maps = manifest.at("maps");
    for (const auto& [name, member] : kMapFields)
      stored.maps.*member = load_texture(dir / maps.at(name).get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  stored.maps.validate();
  return stored;
}

}  // namespace wrinkle
