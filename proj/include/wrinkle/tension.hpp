#pragma once

#include <span>
#include <vector>

#include "wrinkle/mesh.hpp"
#include "wrinkle/texture.hpp"

namespace wrinkle {

// Per-vertex signed tension, aligned with a mesh's vertex order.
// Positive values mean compression, negative expansion, zero no change.
struct TensionField {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// Base edges shorter than this are left out of a vertex's mean.
inline constexpr double kMinBaseEdgeLength = 1e-9;

struct TensionParams {
  static constexpr int kMaxIterations = 64;

  double strength = 10.0;  // s, scales raw tension
  double bias = 0.0;       // b, added after scaling
  int expansion_iters = 0;    // >0 dilate the expansion channel, <0 erode it
  int compression_iters = 0;  // same for compression

  // Throws ConfigError when a field is out of bounds.
  void validate() const;
};

// t_i = 1 - mean_k(|e_k| / |e_k base|) over the edges incident to vertex i.
// Throws TopologyError if the meshes do not share connectivity.
TensionField compute_tension(const Mesh& base, const Mesh& deformed);

// s * t + b, elementwise.
TensionField apply_params(const TensionField& tension, const TensionParams& params);

// Splits the field into compression max(t, 0) and expansion max(-t, 0)
// channels, runs |iters| rounds of closed-neighbourhood max (iters > 0) or
// min (iters < 0) on each, and returns compression - expansion.
TensionField propagate(const TensionField& tension, const Mesh& mesh, int expansion_iters,
                       int compression_iters);

// One round of grayscale morphology over the vertex graph.
enum class Morphology { dilate, erode };
std::vector<double> morph_vertex_values(std::span<const double> values, const Mesh& mesh,
                                        Morphology op);

// compute_tension -> apply_params -> propagate.
TensionField weighted_tension(const Mesh& base, const Mesh& deformed, const TensionParams& params);

// Rasterizes a per-vertex field into UV space at resolution x resolution.
// Faces are fan-triangulated from corner 0; a texel whose centre falls inside
// a UV triangle gets the barycentric blend of its corner values, later faces
// overwrite earlier ones, uncovered texels are 0. Throws DataError without UVs.
Texture bake_tension(const Mesh& mesh, const TensionField& tension, int resolution);

// 3-channel preview: compression -> red, expansion -> green, clamped to [0, 1].
Texture tension_preview(const Texture& baked);

}  // namespace wrinkle
