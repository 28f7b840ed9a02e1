#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wrinkle {

// Row-major float raster, 1 (scalar) or 3 (RGB) channels. Row 0 is the top
// of the image; texel (x, y) covers UV u in [x/W, (x+1)/W) and
// v in [1 - (y+1)/H, 1 - y/H).
class Texture {
 public:
  Texture() = default;
  Texture(int width, int height, int channels, float fill = 0.0f);
  Texture(int width, int height, int channels, std::vector<float> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return samples_.empty(); }
  std::size_t texel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::span<const float> samples() const { return samples_; }
  std::span<float> samples() { return samples_; }

  float& at(int x, int y, int c = 0) {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  float at(int x, int y, int c = 0) const {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  bool same_shape(const Texture& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }
  bool same_size(const Texture& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const;

  std::string shape_string() const;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> samples_;
};

// Bitwise sample equality (distinguishes +0/-0, treats identical NaN payloads equal).
bool identical(const Texture& a, const Texture& b);

// Throws DimensionError naming `context` unless width, height and channels match.
void require_same_shape(const Texture& a, const Texture& b, const std::string& context);
// Same but ignores channel count.
void require_same_size(const Texture& a, const Texture& b, const std::string& context);

// Per texel (1-w)*a + w*b on every channel; w is single-channel.
Texture lerp_textures(const Texture& a, const Texture& b, const Texture& w);

// Mean over all samples of (a-b)^2, accumulated in double.
double mse(const Texture& a, const Texture& b);

Texture clamped(Texture t, float lo, float hi);

// --- file I/O -------------------------------------------------------------

enum class PngDepth { bits8 = 8, bits16 = 16 };

// Dispatches on extension: .png or .pfm.
Texture load_texture(const std::filesystem::path& path);
void save_texture(const Texture& texture, const std::filesystem::path& path,
                  PngDepth depth = PngDepth::bits8);

Texture load_png(const std::filesystem::path& path);
// Samples are clamped to [0, 1] and rounded to the nearest code value.
void save_png(const Texture& texture, const std::filesystem::path& path,
              PngDepth depth = PngDepth::bits8);

// PFM stores scanlines bottom-to-top; rows are flipped on read/write so that
// row 0 in memory is always the top of the image.
Texture load_pfm(const std::filesystem::path& path);
void save_pfm(const Texture& texture, const std::filesystem::path& path);

}  // namespace wrinkle
