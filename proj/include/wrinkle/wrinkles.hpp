#pragma once

#include <span>
#include <string>
#include <vector>

#include "wrinkle/texture.hpp"

namespace wrinkle {

// One expression scan of an identity, already cleaned and registered to UV space.
struct ExpressionSample {
  std::string name;
  Texture albedo;        // 3 channels
  Texture displacement;  // 1 channel
  Texture tension_map;   // 1 channel, baked expression-vs-neutral tension
};

struct WrinkleMapSet {
  Texture neutral_albedo, expanded_albedo, compressed_albedo;
  Texture neutral_disp, expanded_disp, compressed_disp;

  // Throws DimensionError unless all six rasters share width/height and the
  // albedo/displacement channel counts are 3/1.
  void validate() const;
};

inline constexpr double kDefaultSoftmaxBeta = 10.0;

// Softmax of logits into weights (same length). Shift-stabilized; every
// weight is in [0, 1] and they sum to 1 up to rounding.
void softmax(std::span<const double> logits, std::span<double> weights);

// Per texel, softmax(beta * [0, c_1, ..., c_K]) mixes the neutral texel
// with the K expression texels, where c_k = max(tension_k, 0) for the
// compressed maps and max(-tension_k, 0) for the expanded maps. Albedo and
// displacement share the weights. The result does not depend on sample order.
WrinkleMapSet build_wrinkle_maps(const Texture& neutral_albedo, const Texture& neutral_disp,
                                 std::span<const ExpressionSample> samples,
                                 double beta = kDefaultSoftmaxBeta);

struct Donor {
  std::string identity;
  WrinkleMapSet maps;
};

struct GraftResult {
  WrinkleMapSet maps;
  std::string donor;   // identity of the selected donor
  double donor_mse = 0;  // neutral-albedo MSE against the target
};

// Chooses the donor whose neutral albedo is closest to the target's (MSE,
// ties to the lexicographically smallest identity) and adds the donor's
// wrinkle-minus-neutral deltas to the target neutrals. Albedo is clamped to
// [0, 1]; displacement is not.
GraftResult graft_wrinkles(const Texture& target_neutral_albedo, const Texture& target_neutral_disp,
                           std::span<const Donor> donors);

// Index of the donor graft_wrinkles would pick.
std::size_t select_donor(const Texture& target_neutral_albedo, std::span<const Donor> donors);

// Target neutral plus (donor wrinkle - donor neutral), computed in double.
Texture transfer_delta(const Texture& target_neutral, const Texture& donor_neutral,
                       const Texture& donor_wrinkle);

struct BlendedTextures {
  Texture albedo;
  Texture displacement;
};

// Per texel w = clamp(tension, -1, 1); out = (1 - |w|) * neutral + |w| * X,
// X = compressed for w > 0 and expanded otherwise. Albedo is clamped to [0, 1].
BlendedTextures blend_at_synthesis(const WrinkleMapSet& maps, const Texture& tension_map);

}  // namespace wrinkle
