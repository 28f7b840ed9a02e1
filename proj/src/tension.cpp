#include "wrinkle/tension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "wrinkle/error.hpp"
#include "wrinkle/log.hpp"

namespace wrinkle {

void TensionParams::validate() const {
  if (!std::isfinite(strength) || strength < 0.0)
    throw ConfigError("tension strength must be finite and >= 0");
  if (!std::isfinite(bias)) throw ConfigError("tension bias must be finite");
  if (std::abs(expansion_iters) > kMaxIterations || std::abs(compression_iters) > kMaxIterations)
    throw ConfigError("tension propagation iterations must be within [-" +
                      std::to_string(kMaxIterations) + ", " + std::to_string(kMaxIterations) + "]");
}

TensionField compute_tension(const Mesh& base, const Mesh& deformed) {
  if (!same_topology(base, deformed)) throw TopologyError("topology mismatch");

  const auto edges = base.edges();
  std::vector<double> ratio(edges.size());
  std::vector<char> usable(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double rest = distance(base.vertex(edges[k].a), base.vertex(edges[k].b));
    usable[k] = rest >= kMinBaseEdgeLength;
    ratio[k] = usable[k] ? distance(deformed.vertex(edges[k].a), deformed.vertex(edges[k].b)) / rest
                         : 0.0;
  }

  TensionField out;
  out.values.assign(base.vertex_count(), 0.0);
  std::size_t isolated = 0;
  for (std::size_t v = 0; v < base.vertex_count(); ++v) {
    double sum = 0.0;
    int count = 0;
    for (const int k : base.incident_edges(v)) {
      if (!usable[k]) continue;
      sum += ratio[k];
      ++count;
    }
    if (base.incident_edges(v).empty()) ++isolated;
    if (count > 0) out.values[v] = 1.0 - sum / count;
  }
  if (isolated > 0)
    log::warn("tension", std::to_string(isolated) + " vertex(es) without incident edges; tension set to 0");
  return out;
}

TensionField apply_params(const TensionField& tension, const TensionParams& params) {
  TensionField out;
  out.values.reserve(tension.size());
  for (const double t : tension.values) out.values.push_back(params.strength * t + params.bias);
  return out;
}

std::vector<double> morph_vertex_values(std::span<const double> values, const Mesh& mesh,
                                        Morphology op) {
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    double acc = values[v];
    const int self = static_cast<int>(v);
    for (const int k : mesh.incident_edges(v)) {
      const double other = values[mesh.other_end(k, self)];
      acc = op == Morphology::dilate ? std::max(acc, other) : std::min(acc, other);
    }
    out[v] = acc;
  }
  return out;
}

namespace {

void morph_rounds(std::vector<double>& channel, const Mesh& mesh, int iters) {
  const auto op = iters > 0 ? Morphology::dilate : Morphology::erode;
  for (int i = 0; i < std::abs(iters); ++i) channel = morph_vertex_values(channel, mesh, op);
}

}  // namespace

TensionField propagate(const TensionField& tension, const Mesh& mesh, int expansion_iters,
                       int compression_iters) {
  if (tension.size() != mesh.vertex_count())
    throw DimensionError("propagate: tension field has " + std::to_string(tension.size()) +
                         " values for " + std::to_string(mesh.vertex_count()) + " vertices");
  if (expansion_iters == 0 && compression_iters == 0) return tension;

  std::vector<double> compression(tension.size());
  std::vector<double> expansion(tension.size());
  for (std::size_t i = 0; i < tension.size(); ++i) {
    compression[i] = std::max(tension.values[i], 0.0);
    expansion[i] = std::max(-tension.values[i], 0.0);
  }
  morph_rounds(compression, mesh, compression_iters);
  morph_rounds(expansion, mesh, expansion_iters);

  TensionField out;
  out.values.resize(tension.size());
  for (std::size_t i = 0; i < tension.size(); ++i) out.values[i] = compression[i] - expansion[i];
  return out;
}

TensionField weighted_tension(const Mesh& base, const Mesh& deformed, const TensionParams& params) {
  params.validate();
  return propagate(apply_params(compute_tension(base, deformed), params), base,
                   params.expansion_iters, params.compression_iters);
}

}  // namespace wrinkle
