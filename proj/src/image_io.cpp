#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "wrinkle/error.hpp"
#include "wrinkle/texture.hpp"

namespace wrinkle {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp; the message is captured here so it
// can be rethrown as a C++ exception once we are back in a safe frame.
struct PngErrorState {
  char message[256] = {};
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

Texture load_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());

  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0)
    throw DataError(path.string() + ": not a PNG file");

  PngErrorState state;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler, png_warning_handler);
  if (!png) throw IoError("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: out of memory");
  }

  // Everything touched between setjmp and the longjmp target must be either
  // trivially destructible or allocated before setjmp.
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  volatile int channels = 0;
  volatile bool unsupported = false;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError(path.string() + ": " + state.message);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (color_type == PNG_COLOR_TYPE_GRAY)
    channels = 1;
  else if (color_type == PNG_COLOR_TYPE_RGB)
    channels = 3;
  if (channels == 0 || (bit_depth != 8 && bit_depth != 16) || png_get_valid(png, info, PNG_INFO_tRNS)) {
    unsupported = true;
  } else {
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    const auto row_bytes = png_get_rowbytes(png, info);
    pixels.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  if (unsupported)
    throw UnsupportedFormatError(path.string() + ": unsupported PNG (color type " +
                                 std::to_string(color_type) + ", bit depth " +
                                 std::to_string(bit_depth) +
                                 "); expected 8/16-bit grayscale or RGB");

  Texture out(static_cast<int>(width), static_cast<int>(height), channels);
  auto samples = out.samples();
  if (bit_depth == 8) {
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = pixels[i] / 255.0f;
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const unsigned code = (unsigned{pixels[2 * i]} << 8) | pixels[2 * i + 1];
      samples[i] = static_cast<float>(code / 65535.0);
    }
  }
  return out;
}

void save_png(const Texture& texture, const std::filesystem::path& path, PngDepth depth) {
  if (texture.empty()) throw DimensionError("save_png: empty texture");
  const int channels = texture.channels();
  const int bits = static_cast<int>(depth);
  const int bytes_per_sample = bits / 8;
  const auto width = static_cast<std::size_t>(texture.width());
  const auto height = static_cast<std::size_t>(texture.height());
  const double max_code = bits == 8 ? 255.0 : 65535.0;

  std::vector<png_byte> pixels(width * height * channels * bytes_per_sample);
  const auto samples = texture.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = std::isfinite(samples[i]) ? std::clamp<double>(samples[i], 0.0, 1.0) : 0.0;
    const auto code = static_cast<unsigned>(std::lround(v * max_code));
    if (bytes_per_sample == 1) {
      pixels[i] = static_cast<png_byte>(code);
    } else {
      pixels[2 * i] = static_cast<png_byte>(code >> 8);
      pixels[2 * i + 1] = static_cast<png_byte>(code & 0xff);
    }
  }
  std::vector<png_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y)
    rows[y] = pixels.data() + y * width * channels * bytes_per_sample;

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write " + path.string());

  PngErrorState state;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler, png_warning_handler);
  if (!png) throw IoError("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path.string() + ": " + state.message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bits,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError("failed writing " + path.string());
}

Texture load_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string magic;
  int width = 0, height = 0;
  double scale = 0;
  in >> magic >> width >> height >> scale;
  if (!in || (magic != "PF" && magic != "Pf"))
    throw DataError(path.string() + ": malformed PFM header");
  if (width <= 0 || height <= 0 || scale == 0.0)
    throw DataError(path.string() + ": invalid PFM dimensions or scale");
  in.get();  // single whitespace byte before raster data
  const int channels = magic == "PF" ? 3 : 1;
  const std::size_t row_floats = static_cast<std::size_t>(width) * channels;
  std::vector<float> data(row_floats * height);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(float)))
    throw DataError(path.string() + ": truncated PFM raster");

  const bool file_little = scale < 0;
  if (file_little != (std::endian::native == std::endian::little)) {
    for (auto& v : data) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      bits = __builtin_bswap32(bits);
      std::memcpy(&v, &bits, 4);
    }
  }
  Texture out(width, height, channels);
  auto samples = out.samples();
  for (int y = 0; y < height; ++y)
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>((height - 1 - y) * row_floats), row_floats,
                samples.begin() + static_cast<std::ptrdiff_t>(y * row_floats));
  if (!out.all_finite()) throw DataError(path.string() + ": PFM contains non-finite samples");
  return out;
}

void save_pfm(const Texture& texture, const std::filesystem::path& path) {
  if (texture.empty()) throw DimensionError("save_pfm: empty texture");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << (texture.channels() == 3 ? "PF" : "Pf") << '\n'
      << texture.width() << ' ' << texture.height() << '\n'
      << "-1.0\n";
  const std::size_t row_floats = static_cast<std::size_t>(texture.width()) * texture.channels();
  const auto samples = texture.samples();
  std::vector<float> row(row_floats);
  for (int y = texture.height() - 1; y >= 0; --y) {
    std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(y * row_floats), row_floats, row.begin());
    if constexpr (std::endian::native != std::endian::little) {
      for (auto& v : row) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        bits = __builtin_bswap32(bits);
        std::memcpy(&v, &bits, 4);
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row_floats * sizeof(float)));
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

Texture load_texture(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".png") return load_png(path);
  if (ext == ".pfm") return load_pfm(path);
  throw UnsupportedFormatError(path.string() + ": unsupported texture extension '" + ext + "'");
}

void save_texture(const Texture& texture, const std::filesystem::path& path, PngDepth depth) {
  const auto ext = lower_extension(path);
  if (ext == ".png") return save_png(texture, path, depth);
  if (ext == ".pfm") return save_pfm(texture, path);
  throw UnsupportedFormatError(path.string() + ": unsupported texture extension '" + ext + "'");
}

}  // namespace wrinkle
