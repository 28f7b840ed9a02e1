#include "wrinkle/primitives.hpp"

#include <cmath>
#include <numbers>

#include "wrinkle/error.hpp"

namespace wrinkle {

Mesh make_grid(int cols, int rows, int split_quads) {
  if (cols < 1 || rows < 1) throw ConfigError("make_grid: need at least one quad");
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(cols + 1) * (rows + 1));
  for (int j = 0; j <= rows; ++j)
    for (int i = 0; i <= cols; ++i)
      vertices.push_back({static_cast<double>(i) / cols, static_cast<double>(j) / rows, 0.0});

  std::vector<std::vector<int>> faces;
  std::vector<Vec2> uvs;
  const auto index = [&](int i, int j) { return j * (cols + 1) + i; };
  const auto uv = [&](int v) { return Vec2{vertices[v].x, vertices[v].y}; };
  int quad = 0;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i, ++quad) {
      const int a = index(i, j), b = index(i + 1, j), c = index(i + 1, j + 1), d = index(i, j + 1);
      std::vector<std::vector<int>> pieces;
      if (quad < split_quads)
        pieces = {{a, b, c}, {a, c, d}};
      else
        pieces = {{a, b, c, d}};
      for (auto& face : pieces) {
        for (const int v : face) uvs.push_back(uv(v));
        faces.push_back(std::move(face));
      }
    }
  }
  return Mesh(std::move(vertices), faces, std::move(uvs));
}

Mesh make_cylinder(int segments, int rings, double radius, double height) {
  if (segments < 3 || rings < 1) throw ConfigError("make_cylinder: need >= 3 segments and >= 1 ring");
  std::vector<Vec3> vertices;
  for (int j = 0; j <= rings; ++j) {
    const double z = height * j / rings;
    for (int i = 0; i < segments; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / segments;
      vertices.push_back({radius * std::cos(angle), radius * std::sin(angle), z});
    }
  }
  std::vector<std::vector<int>> faces;
  std::vector<Vec2> uvs;
  for (int j = 0; j < rings; ++j) {
    for (int i = 0; i < segments; ++i) {
      const int i1 = (i + 1) % segments;
      faces.push_back({j * segments + i, j * segments + i1, (j + 1) * segments + i1,
                       (j + 1) * segments + i});
      // The seam column uses u = 1 on its right side instead of wrapping to 0.
      const double u0 = static_cast<double>(i) / segments;
      const double u1 = static_cast<double>(i + 1) / segments;
      const double v0 = static_cast<double>(j) / rings;
      const double v1 = static_cast<double>(j + 1) / rings;
      uvs.insert(uvs.end(), {{u0, v0}, {u1, v0}, {u1, v1}, {u0, v1}});
    }
  }
  return Mesh(std::move(vertices), faces, std::move(uvs));
}

Mesh pinch_cylinder(const Mesh& cylinder, double amount, double z_mid, double width) {
  std::vector<Vec3> moved(cylinder.vertices().begin(), cylinder.vertices().end());
  for (auto& v : moved) {
    const double d = (v.z - z_mid) / width;
    const double scale = 1.0 - amount * std::exp(-d * d);
    v.x *= scale;
    v.y *= scale;
  }
  return cylinder.with_vertices(std::move(moved));
}

Mesh make_face_scale_grid() {
  // (450 + 1) * (16 + 1) = 7,667 vertices; 450 * 16 + 214 = 7,414 polygons.
  return make_grid(450, 16, 214);
}

}  // namespace wrinkle
