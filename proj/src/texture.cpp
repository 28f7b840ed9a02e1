#include "wrinkle/texture.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "wrinkle/error.hpp"

namespace wrinkle {

namespace {

void check_shape(int width, int height, int channels) {
  if (width <= 0 || height <= 0)
    throw DimensionError("texture: dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
  if (channels != 1 && channels != 3)
    throw UnsupportedFormatError("texture: channel count must be 1 or 3, got " +
                                 std::to_string(channels));
}

}  // namespace

Texture::Texture(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  check_shape(width, height, channels);
  samples_.assign(texel_count() * channels, fill);
}

Texture::Texture(int width, int height, int channels, std::vector<float> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  check_shape(width, height, channels);
  if (samples_.size() != texel_count() * channels)
    throw DimensionError("texture: " + std::to_string(samples_.size()) + " samples for shape " +
                         shape_string());
}

bool Texture::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(), [](float v) { return std::isfinite(v); });
}

std::string Texture::shape_string() const {
  return std::to_string(width_) + "x" + std::to_string(height_) + "x" + std::to_string(channels_);
}

bool identical(const Texture& a, const Texture& b) {
  if (!a.same_shape(b)) return false;
  const auto sa = a.samples();
  const auto sb = b.samples();
  return std::memcmp(sa.data(), sb.data(), sa.size_bytes()) == 0;
}

void require_same_shape(const Texture& a, const Texture& b, const std::string& context) {
  if (!a.same_shape(b))
    throw DimensionError(context + ": texture shape mismatch (" + a.shape_string() + " vs " +
                         b.shape_string() + ")");
}

void require_same_size(const Texture& a, const Texture& b, const std::string& context) {
  if (!a.same_size(b))
    throw DimensionError(context + ": texture size mismatch (" + a.shape_string() + " vs " +
                         b.shape_string() + ")");
}

Texture lerp_textures(const Texture& a, const Texture& b, const Texture& w) {
  require_same_shape(a, b, "lerp_textures");
  require_same_size(a, w, "lerp_textures");
  if (w.channels() != 1) throw DimensionError("lerp_textures: weight texture must be 1-channel");
  Texture out(a.width(), a.height(), a.channels());
  const int channels = a.channels();
  const auto sa = a.samples();
  const auto sb = b.samples();
  const auto sw = w.samples();
  auto so = out.samples();
  for (std::size_t t = 0; t < a.texel_count(); ++t) {
    const double weight = sw[t];
    for (int c = 0; c < channels; ++c) {
      const auto i = t * channels + c;
      so[i] = static_cast<float>((1.0 - weight) * sa[i] + weight * sb[i]);
    }
  }
  return out;
}

double mse(const Texture& a, const Texture& b) {
  require_same_shape(a, b, "mse");
  const auto sa = a.samples();
  const auto sb = b.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = static_cast<double>(sa[i]) - sb[i];
    sum += d * d;
  }
  return sum / static_cast<double>(sa.size());
}

Texture clamped(Texture t, float lo, float hi) {
  for (auto& v : t.samples()) v = std::clamp(v, lo, hi);
  return t;
}

}  // namespace wrinkle
