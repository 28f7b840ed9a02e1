#include "wrinkle/cleaning.hpp"

#include <algorithm>
#include <cmath>

#include "wrinkle/error.hpp"

namespace wrinkle {

double difference_variance(const Texture& raw, const Texture& clean) {
  require_same_shape(raw, clean, "fine mask");
  const int channels = raw.channels();
  const std::size_t n = raw.texel_count();
  if (n < 2) return 0.0;
  const auto r = raw.samples();
  const auto c = clean.samples();
  double total = 0.0;
  for (int ch = 0; ch < channels; ++ch) {
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t)
      mean += static_cast<double>(r[t * channels + ch]) - c[t * channels + ch];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double d = static_cast<double>(r[t * channels + ch]) - c[t * channels + ch] - mean;
      ss += d * d;
    }
    total += ss / static_cast<double>(n - 1);
  }
  return total;
}

Texture dilate_mask(const Texture& mask, int rounds) {
  if (mask.channels() != 1) throw DimensionError("dilate_mask: mask must be 1-channel");
  Texture current = mask;
  const int w = mask.width();
  const int h = mask.height();
  for (int r = 0; r < rounds; ++r) {
    Texture next = current;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (current.at(x, y) != 0.0f) continue;
        bool hit = false;
        for (int dy = -1; dy <= 1 && !hit; ++dy) {
          for (int dx = -1; dx <= 1 && !hit; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            hit = current.at(nx, ny) != 0.0f;
          }
        }
        if (hit) next.at(x, y) = 1.0f;
      }
    }
    current = std::move(next);
  }
  return current;
}

Texture build_fine_mask(const Texture& raw_neutral, const Texture& clean_neutral, double tau,
                        int dilate_px) {
  require_same_shape(raw_neutral, clean_neutral, "fine mask");
  if (!(tau > 0.0)) throw ConfigError("fine mask: tau must be > 0");
  if (dilate_px < 0) throw ConfigError("fine mask: dilate_px must be >= 0");

  const double threshold = tau * tau * difference_variance(raw_neutral, clean_neutral);
  const int channels = raw_neutral.channels();
  const auto r = raw_neutral.samples();
  const auto c = clean_neutral.samples();
  Texture mask(raw_neutral.width(), raw_neutral.height(), 1, 0.0f);
  auto m = mask.samples();
  for (std::size_t t = 0; t < raw_neutral.texel_count(); ++t) {
    double d2 = 0.0;
    for (int ch = 0; ch < channels; ++ch) {
      const double d = static_cast<double>(r[t * channels + ch]) - c[t * channels + ch];
      d2 += d * d;
    }
    if (d2 > threshold) m[t] = 1.0f;
  }
  return dilate_px > 0 ? dilate_mask(mask, dilate_px) : mask;
}

Texture clean_expression_texture(const Texture& raw_expr, const Texture& clean_neutral,
                                 const MaskStack& masks) {
  require_same_shape(raw_expr, clean_neutral, "clean");
  require_same_size(raw_expr, masks.coarse, "clean: coarse mask");
  require_same_size(raw_expr, masks.fine, "clean: fine mask");
  if (masks.coarse.channels() != 1 || masks.fine.channels() != 1)
    throw DimensionError("clean: masks must be 1-channel");

  const int channels = raw_expr.channels();
  const auto raw = raw_expr.samples();
  const auto clean = clean_neutral.samples();
  const auto coarse = masks.coarse.samples();
  const auto fine = masks.fine.samples();
  Texture out(raw_expr.width(), raw_expr.height(), channels);
  auto o = out.samples();
  for (std::size_t t = 0; t < raw_expr.texel_count(); ++t) {
    const double a = std::clamp<double>(coarse[t], 0.0, 1.0);
    const bool artifact = fine[t] >= 0.5f;
    for (int ch = 0; ch < channels; ++ch) {
      const auto i = t * channels + ch;
      const double inner = artifact ? clean[i] : raw[i];
      o[i] = static_cast<float>(a * inner + (1.0 - a) * clean[i]);
    }
  }
  return out;
}

}  // namespace wrinkle
