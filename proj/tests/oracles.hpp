#pragma once

// Reference implementations used only by tests. They work directly from the
// face lists (no Mesh edge/adjacency tables) so they stay independent of the
// code paths they check.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "wrinkle/geometry.hpp"
#include "wrinkle/mesh.hpp"

namespace oracle {

using wrinkle::Vec3;
using Faces = std::vector<std::vector<int>>;

// Neighbour sets by scanning every face for consecutive corners.
inline std::vector<std::set<int>> neighbour_sets(std::size_t vertex_count, const Faces& faces) {
  std::vector<std::set<int>> out(vertex_count);
  for (const auto& f : faces) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const int a = f[i], b = f[(i + 1) % f.size()];
      out[a].insert(b);
      out[b].insert(a);
    }
  }
  return out;
}

inline std::vector<double> tension(const std::vector<Vec3>& base, const std::vector<Vec3>& deformed,
                                   const Faces& faces) {
  const auto nbrs = neighbour_sets(base.size(), faces);
  std::vector<double> out(base.size(), 0.0);
  for (std::size_t v = 0; v < base.size(); ++v) {
    double sum = 0.0;
    int k = 0;
    for (const int j : nbrs[v]) {
      const double rest = std::sqrt((base[v].x - base[j].x) * (base[v].x - base[j].x) +
                                    (base[v].y - base[j].y) * (base[v].y - base[j].y) +
                                    (base[v].z - base[j].z) * (base[v].z - base[j].z));
      if (rest < 1e-9) continue;
      const double now = std::sqrt((deformed[v].x - deformed[j].x) * (deformed[v].x - deformed[j].x) +
                                   (deformed[v].y - deformed[j].y) * (deformed[v].y - deformed[j].y) +
                                   (deformed[v].z - deformed[j].z) * (deformed[v].z - deformed[j].z));
      sum += now / rest;
      ++k;
    }
    out[v] = k ? 1.0 - sum / k : 0.0;
  }
  return out;
}

// One closed-neighbourhood max (dilate) or min (erode) round.
inline std::vector<double> morph_round(const std::vector<double>& values,
                                       const std::vector<std::set<int>>& nbrs, bool dilate) {
  std::vector<double> out(values.size());
  for (std::size_t v = 0; v < values.size(); ++v) {
    double acc = values[v];
    for (const int j : nbrs[v]) acc = dilate ? std::max(acc, values[j]) : std::min(acc, values[j]);
    out[v] = acc;
  }
  return out;
}

inline std::vector<double> propagate(const std::vector<double>& t, std::size_t vertex_count,
                                     const Faces& faces, int expansion_iters, int compression_iters) {
  const auto nbrs = neighbour_sets(vertex_count, faces);
  std::vector<double> comp(t.size()), expa(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    comp[i] = t[i] > 0 ? t[i] : 0.0;
    expa[i] = t[i] < 0 ? -t[i] : 0.0;
  }
  for (int r = 0; r < std::abs(compression_iters); ++r) comp = morph_round(comp, nbrs, compression_iters > 0);
  for (int r = 0; r < std::abs(expansion_iters); ++r) expa = morph_round(expa, nbrs, expansion_iters > 0);
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = comp[i] - expa[i];
  return out;
}

struct RandomMesh {
  std::vector<Vec3> vertices;
  Faces faces;
};

// Random polygon soup of triangles and quads over `vertex_count` points.
inline RandomMesh random_mesh(std::mt19937_64& rng, int vertex_count, int face_count) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, vertex_count - 1);
  std::uniform_int_distribution<int> sides(3, 4);
  RandomMesh m;
  for (int i = 0; i < vertex_count; ++i) m.vertices.push_back({coord(rng), coord(rng), coord(rng)});
  for (int f = 0; f < face_count; ++f) {
    const int n = std::min(sides(rng), vertex_count);
    std::vector<int> face;
    while (static_cast<int>(face.size()) < n) {
      const int v = pick(rng);
      if (std::find(face.begin(), face.end(), v) == face.end()) face.push_back(v);
    }
    m.faces.push_back(std::move(face));
  }
  return m;
}

inline std::vector<Vec3> jitter(std::mt19937_64& rng, const std::vector<Vec3>& vertices, double amount) {
  std::uniform_real_distribution<double> d(-amount, amount);
  std::vector<Vec3> out = vertices;
  for (auto& v : out) v = {v.x + d(rng), v.y + d(rng), v.z + d(rng)};
  return out;
}

// Uniformly random rotation (from a normalized Gaussian quaternion) plus a
// random translation.
inline std::vector<Vec3> random_rigid_motion(std::mt19937_64& rng, const std::vector<Vec3>& vertices) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-10.0, 10.0);
  double w = n(rng), x = n(rng), y = n(rng), z = n(rng);
  const double len = std::sqrt(w * w + x * x + y * y + z * z);
  w /= len; x /= len; y /= len; z /= len;
  const double r[3][3] = {{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                          {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                          {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
  const Vec3 t{shift(rng), shift(rng), shift(rng)};
  std::vector<Vec3> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices)
    out.push_back({r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z + t.x,
                   r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z + t.y,
                   r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z + t.z});
  return out;
}

}  // namespace oracle
