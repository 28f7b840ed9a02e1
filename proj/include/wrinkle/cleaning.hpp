#pragma once

#include "wrinkle/texture.hpp"

namespace wrinkle {

inline constexpr double kDefaultMaskTau = 3.0;
inline constexpr int kDefaultMaskDilation = 2;

// coarse: hand-authored identity-agnostic region weight in [0, 1].
// fine: per-identity binary artifact mask (1 = artifact).
struct MaskStack {
  Texture coarse;
  Texture fine;
};

// Sum over channels of the sample variance (n - 1 denominator) of raw - clean.
double difference_variance(const Texture& raw, const Texture& clean);

// Marks texels whose squared colour difference from the clean neutral exceeds
// tau^2 times the global difference variance, then grows the mask by
// dilate_px rounds of 8-neighbour binary dilation.
Texture build_fine_mask(const Texture& raw_neutral, const Texture& clean_neutral, double tau,
                        int dilate_px);

// One or more rounds of 8-connected binary dilation (texels outside the
// raster are ignored).
Texture dilate_mask(const Texture& mask, int rounds);

// Inside the coarse region, artifact texels take the clean neutral value and
// the rest keep the raw expression; outside it the clean neutral is used.
// out = coarse * (fine ? clean : raw) + (1 - coarse) * clean.
Texture clean_expression_texture(const Texture& raw_expr, const Texture& clean_neutral,
                                 const MaskStack& masks);

}  // namespace wrinkle
