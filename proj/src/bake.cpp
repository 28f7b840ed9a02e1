#include <algorithm>
#include <cmath>

#include "wrinkle/error.hpp"
#include "wrinkle/tension.hpp"

namespace wrinkle {

namespace {

// Barycentric coordinates are accepted down to this (negative) value so that
// texel centres lying exactly on a shared edge are not dropped by rounding.
constexpr double kInsideTolerance = -1e-12;

struct UvTriangle {
  Vec2 p0, p1, p2;
  double v0, v1, v2;
};

void raster_triangle(const UvTriangle& tri, Texture& out) {
  const int w = out.width();
  const int h = out.height();
  // Work in texel units: x = u * W, y_down = (1 - v) * H.
  const auto to_px = [&](Vec2 uv) { return Vec2{uv.x * w, (1.0 - uv.y) * h}; };
  const Vec2 a = to_px(tri.p0), b = to_px(tri.p1), c = to_px(tri.p2);
  const double area = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  if (area == 0.0 || !std::isfinite(area)) return;

  const double min_x = std::min({a.x, b.x, c.x}), max_x = std::max({a.x, b.x, c.x});
  const double min_y = std::min({a.y, b.y, c.y}), max_y = std::max({a.y, b.y, c.y});
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(max_x - 0.5)));
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(max_y - 0.5)));

  for (int y = y0; y <= y1; ++y) {
    const double py = y + 0.5;
    for (int x = x0; x <= x1; ++x) {
      const double px = x + 0.5;
      const double l1 = ((px - a.x) * (c.y - a.y) - (c.x - a.x) * (py - a.y)) / area;
      const double l2 = ((b.x - a.x) * (py - a.y) - (px - a.x) * (b.y - a.y)) / area;
      const double l0 = 1.0 - l1 - l2;
      if (l0 < kInsideTolerance || l1 < kInsideTolerance || l2 < kInsideTolerance) continue;
      out.at(x, y) = static_cast<float>(l0 * tri.v0 + l1 * tri.v1 + l2 * tri.v2);
    }
  }
}

}  // namespace

Texture bake_tension(const Mesh& mesh, const TensionField& tension, int resolution) {
  if (!mesh.has_uvs()) throw DataError("bake_tension: mesh has no UV coordinates");
  if (resolution < 1) throw ConfigError("bake_tension: resolution must be >= 1");
  if (tension.size() != mesh.vertex_count())
    throw DimensionError("bake_tension: tension field has " + std::to_string(tension.size()) +
                         " values for " + std::to_string(mesh.vertex_count()) + " vertices");

  Texture out(resolution, resolution, 1, 0.0f);
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto corners = mesh.face(f);
    const auto uvs = mesh.face_uvs(f);
    for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
      raster_triangle({uvs[0], uvs[i], uvs[i + 1], tension[corners[0]], tension[corners[i]],
                       tension[corners[i + 1]]},
                      out);
    }
  }
  return out;
}

Texture tension_preview(const Texture& baked) {
  if (baked.channels() != 1) throw DimensionError("tension_preview: expected 1-channel texture");
  Texture out(baked.width(), baked.height(), 3, 0.0f);
  for (int y = 0; y < baked.height(); ++y) {
    for (int x = 0; x < baked.width(); ++x) {
      const float t = baked.at(x, y);
      out.at(x, y, 0) = std::clamp(t, 0.0f, 1.0f);
      out.at(x, y, 1) = std::clamp(-t, 0.0f, 1.0f);
    }
  }
  return out;
}

}  // namespace wrinkle
