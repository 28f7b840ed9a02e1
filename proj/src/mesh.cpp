#include "wrinkle/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wrinkle/error.hpp"

namespace wrinkle {

Mesh::Mesh(std::vector<Vec3> vertices, const std::vector<std::vector<int>>& faces,
           std::vector<Vec2> corner_uvs)
    : vertices_(std::move(vertices)), corner_uvs_(std::move(corner_uvs)) {
  const auto n = static_cast<long long>(vertices_.size());
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
      throw DataError("mesh: non-finite vertex position");
  }
  face_offsets_.reserve(faces.size() + 1);
  face_offsets_.push_back(0);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& face = faces[f];
    if (face.size() < 3)
      throw DataError("mesh: face " + std::to_string(f) + " has fewer than 3 corners");
    for (std::size_t i = 0; i < face.size(); ++i) {
      if (face[i] < 0 || face[i] >= n)
        throw DataError("mesh: face " + std::to_string(f) + " references vertex " +
                        std::to_string(face[i]) + " out of range [0, " + std::to_string(n) + ")");
      for (std::size_t j = 0; j < i; ++j) {
        if (face[j] == face[i])
          throw DataError("mesh: face " + std::to_string(f) + " repeats vertex " +
                          std::to_string(face[i]));
      }
    }
    corners_.insert(corners_.end(), face.begin(), face.end());
    face_offsets_.push_back(corners_.size());
  }
  if (!corner_uvs_.empty() && corner_uvs_.size() != corners_.size())
    throw DataError("mesh: " + std::to_string(corner_uvs_.size()) + " corner UVs for " +
                    std::to_string(corners_.size()) + " face corners");
  derive_topology();
}

void Mesh::derive_topology() {
  edges_.clear();
  edges_.reserve(corners_.size());
  for (std::size_t f = 0; f + 1 < face_offsets_.size(); ++f) {
    const auto begin = face_offsets_[f];
    const auto count = face_offsets_[f + 1] - begin;
    for (std::size_t i = 0; i < count; ++i) {
      const int u = corners_[begin + i];
      const int w = corners_[begin + (i + 1) % count];
      edges_.push_back({std::min(u, w), std::max(u, w)});
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  // Counting sort into CSR form; each edge lands in both endpoint lists once.
  adjacency_offsets_.assign(vertices_.size() + 1, 0);
  for (const auto& e : edges_) {
    ++adjacency_offsets_[e.a + 1];
    ++adjacency_offsets_[e.b + 1];
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    adjacency_offsets_[v + 1] += adjacency_offsets_[v];
  adjacency_.assign(adjacency_offsets_.back(), 0);
  std::vector<std::size_t> fill(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    adjacency_[fill[edges_[k].a]++] = static_cast<int>(k);
    adjacency_[fill[edges_[k].b]++] = static_cast<int>(k);
  }
}

Mesh Mesh::with_vertices(std::vector<Vec3> vertices) const {
  if (vertices.size() != vertices_.size())
    throw TopologyError("mesh: vertex count mismatch (" + std::to_string(vertices.size()) +
                        " vs " + std::to_string(vertices_.size()) + ")");
  Mesh copy = *this;
  copy.vertices_ = std::move(vertices);
  return copy;
}

std::vector<std::vector<int>> Mesh::face_lists() const {
  std::vector<std::vector<int>> out;
  out.reserve(face_count());
  for (std::size_t f = 0; f < face_count(); ++f) {
    const auto corners = face(f);
    out.emplace_back(corners.begin(), corners.end());
  }
  return out;
}

bool same_topology(const Mesh& a, const Mesh& b) {
  if (a.vertex_count() != b.vertex_count()) return false;
  const auto ea = a.edges();
  const auto eb = b.edges();
  return std::equal(ea.begin(), ea.end(), eb.begin(), eb.end());
}

}  // namespace wrinkle
