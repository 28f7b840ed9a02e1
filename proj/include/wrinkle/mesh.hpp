#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wrinkle/geometry.hpp"

namespace wrinkle {

// Unordered vertex pair stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Polygon mesh with optional per-corner UVs. Immutable once built; the edge
// set and vertex->edge adjacency are derived on construction.
//
// Edges are the unique unordered pairs of consecutive corners over all faces,
// sorted lexicographically, so two meshes with the same connectivity always
// agree on edge indices regardless of face order.
class Mesh {
 public:
  Mesh() = default;

  // faces: one index list per polygon (>= 3 distinct indices each).
  // corner_uvs: empty, or one entry per face corner in face order.
  // Throws DataError on any invariant violation.
  Mesh(std::vector<Vec3> vertices, const std::vector<std::vector<int>>& faces,
       std::vector<Vec2> corner_uvs = {});

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return face_offsets_.empty() ? 0 : face_offsets_.size() - 1; }
  std::size_t corner_count() const { return corners_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const Vec3> vertices() const { return vertices_; }
  const Vec3& vertex(std::size_t i) const { return vertices_[i]; }

  std::span<const int> face(std::size_t f) const {
    return std::span(corners_).subspan(face_offsets_[f], face_offsets_[f + 1] - face_offsets_[f]);
  }
  // Offset of face f's first corner in the flat corner arrays.
  std::size_t face_offset(std::size_t f) const { return face_offsets_[f]; }

  bool has_uvs() const { return !corner_uvs_.empty(); }
  std::span<const Vec2> corner_uvs() const { return corner_uvs_; }
  std::span<const Vec2> face_uvs(std::size_t f) const {
    return std::span(corner_uvs_).subspan(face_offsets_[f], face_offsets_[f + 1] - face_offsets_[f]);
  }

  std::span<const Edge> edges() const { return edges_; }
  // Indices into edges() of the edges incident to vertex v.
  std::span<const int> incident_edges(std::size_t v) const {
    return std::span(adjacency_).subspan(adjacency_offsets_[v],
                                         adjacency_offsets_[v + 1] - adjacency_offsets_[v]);
  }
  int other_end(int edge_index, int v) const {
    const Edge& e = edges_[edge_index];
    return e.a == v ? e.b : e.a;
  }

  // Same connectivity with new vertex positions.
  Mesh with_vertices(std::vector<Vec3> vertices) const;

  std::vector<std::vector<int>> face_lists() const;

 private:
  void derive_topology();

  std::vector<Vec3> vertices_;
  std::vector<int> corners_;
  std::vector<std::size_t> face_offsets_;
  std::vector<Vec2> corner_uvs_;
  std::vector<Edge> edges_;
  std::vector<int> adjacency_;
  std::vector<std::size_t> adjacency_offsets_;
};

// True iff vertex counts match and the canonical edge sequences are identical.
bool same_topology(const Mesh& a, const Mesh& b);

// Wavefront OBJ subset: v, vt, f (with or without /vt and /vn parts), # comments.
Mesh load_mesh(const std::filesystem::path& path);
Mesh parse_obj(std::string_view text, const std::string& source_name = "<memory>");
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace wrinkle
