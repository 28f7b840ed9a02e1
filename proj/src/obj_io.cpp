#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "wrinkle/error.hpp"
#include "wrinkle/log.hpp"
#include "wrinkle/mesh.hpp"

namespace wrinkle {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

struct LineContext {
  const std::string& source;
  int line;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line, what); }
};

double parse_double(std::string_view token, const LineContext& ctx) {
  // from_chars for double is available in libstdc++ 11
  double value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    ctx.fail("invalid number '" + std::string(token) + "'");
  return value;
}

// Resolves a 1-based (or negative, relative) OBJ index to 0-based.
int parse_index(std::string_view token, std::size_t count, const char* what,
                const LineContext& ctx) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value == 0)
    ctx.fail(std::string("invalid ") + what + " index '" + std::string(token) + "'");
  const long long resolved = value > 0 ? value - 1 : static_cast<long long>(count) + value;
  if (resolved < 0 || resolved >= static_cast<long long>(count))
    ctx.fail(std::string(what) + " index " + std::to_string(value) + " out of range (" +
             std::to_string(count) + " defined)");
  return static_cast<int>(resolved);
}

}  // namespace

Mesh parse_obj(std::string_view text, const std::string& source_name) {
  std::vector<Vec3> positions;
  std::vector<Vec2> texcoords;
  std::vector<std::vector<int>> faces;
  std::vector<Vec2> corner_uvs;
  int faces_with_uv = 0;
  std::map<std::string, int> ignored;

  // Face indices are checked after the whole file is read so that forward
  // references report the face's own line.
  struct PendingCorner {
    std::string_view vertex, texcoord;
  };
  struct PendingFace {
    int line;
    std::vector<PendingCorner> corners;
  };
  std::vector<PendingFace> pending;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    auto line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto tokens = split_ws(line);
    const LineContext ctx{source_name, line_no};
    const auto tag = tokens[0];
    if (tag == "v") {
      if (tokens.size() < 4) ctx.fail("vertex record needs 3 coordinates");
      positions.push_back({parse_double(tokens[1], ctx), parse_double(tokens[2], ctx),
                           parse_double(tokens[3], ctx)});
    } else if (tag == "vt") {
      if (tokens.size() < 3) ctx.fail("texture coordinate record needs 2 values");
      texcoords.push_back({parse_double(tokens[1], ctx), parse_double(tokens[2], ctx)});
    } else if (tag == "f") {
      if (tokens.size() < 4) ctx.fail("face has fewer than 3 corners");
      PendingFace face{line_no, {}};
      int with_uv = 0;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto token = tokens[i];
        const auto slash = token.find('/');
        PendingCorner corner{token.substr(0, slash), {}};
        if (slash != std::string_view::npos) {
          auto rest = token.substr(slash + 1);
          corner.texcoord = rest.substr(0, rest.find('/'));
        }
        if (!corner.texcoord.empty()) ++with_uv;
        face.corners.push_back(corner);
      }
      if (with_uv != 0 && with_uv != static_cast<int>(face.corners.size()))
        ctx.fail("face mixes corners with and without texture coordinates");
      if (with_uv) ++faces_with_uv;
      pending.push_back(std::move(face));
    } else {
      ++ignored[std::string(tag)];
    }
  }

  if (faces_with_uv != 0 && faces_with_uv != static_cast<int>(pending.size()))
    throw ParseError(source_name, pending.front().line,
                     "some faces have texture coordinates and others do not");

  faces.reserve(pending.size());
  for (const auto& face : pending) {
    const LineContext ctx{source_name, face.line};
    std::vector<int> indices;
    indices.reserve(face.corners.size());
    for (const auto& corner : face.corners) {
      indices.push_back(parse_index(corner.vertex, positions.size(), "vertex", ctx));
      if (faces_with_uv)
        corner_uvs.push_back(texcoords[parse_index(corner.texcoord, texcoords.size(),
                                                   "texture coordinate", ctx)]);
    }
    for (std::size_t i = 0; i < indices.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (indices[i] == indices[j]) ctx.fail("face repeats a vertex (degenerate face)");
    faces.push_back(std::move(indices));
  }

  for (const auto& [tag, count] : ignored)
    log::warn("obj", source_name + ": ignored " + std::to_string(count) + " '" + tag + "' record(s)");

  return Mesh(std::move(positions), faces, std::move(corner_uvs));
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mesh file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return parse_obj(buffer.str(), path.string());
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write mesh file " + path.string());
  char buf[128];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    out << buf;
  }
  // Shared texture coordinates are written once.
  std::vector<int> uv_index(mesh.corner_count(), 0);
  if (mesh.has_uvs()) {
    std::map<std::pair<double, double>, int> seen;
    const auto uvs = mesh.corner_uvs();
    for (std::size_t c = 0; c < uvs.size(); ++c) {
      auto [it, inserted] = seen.try_emplace({uvs[c].x, uvs[c].y}, static_cast<int>(seen.size()));
      if (inserted) {
        std::snprintf(buf, sizeof(buf), "vt %.9g %.9g\n", uvs[c].x, uvs[c].y);
        out << buf;
      }
      uv_index[c] = it->second;
    }
  }
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    out << 'f';
    const auto corners = mesh.face(f);
    for (std::size_t i = 0; i < corners.size(); ++i) {
      out << ' ' << corners[i] + 1;
      if (mesh.has_uvs()) out << '/' << uv_index[mesh.face_offset(f) + i] + 1;
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace wrinkle
