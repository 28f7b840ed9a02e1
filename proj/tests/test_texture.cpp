#include <doctest.h>

#include <cstring>
#include <random>

#include "test_util.hpp"
#include "wrinkle/error.hpp"
#include "wrinkle/texture.hpp"

using namespace wrinkle;

namespace {

// Hand-assembled PNG files (zlib stream + CRCs computed offline).
constexpr unsigned char kGray8Value255[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00, 0x00, 0x00, 0x00, 0x3a, 0x7e, 0x9b,
    0x55, 0x00, 0x00, 0x00, 0x0a, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8, 0x0f, 0x00, 0x01,
    0x01, 0x01, 0x00, 0xb1, 0x38, 0xf6, 0x14, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae,
    0x42, 0x60, 0x82};
constexpr unsigned char kRgba8[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x06, 0x00, 0x00, 0x00, 0x1f, 0x15, 0xc4,
    0x89, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x10, 0x50, 0x30, 0x70,
    0x00, 0x00, 0x01, 0x45, 0x00, 0xa1, 0x51, 0x86, 0x26, 0x4f, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45,
    0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
// 2x1, 16-bit gray, samples 0x1234 and 0xffff.
constexpr unsigned char kGray16[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
    0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00, 0x00, 0x81, 0xd9, 0xfc,
    0x15, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x10, 0x32, 0xf9, 0xff,
    0x1f, 0x00, 0x03, 0xe6, 0x02, 0x45, 0x2e, 0x42, 0x96, 0x75, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45,
    0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

template <std::size_t N>
void write_bytes(const std::filesystem::path& path, const unsigned char (&bytes)[N]) {
  testutil::write_file(path, std::string(reinterpret_cast<const char*>(bytes), N));
}

Texture constant(int w, int h, int c, float v) { return Texture(w, h, c, v); }

}  // namespace

TEST_CASE("texture: construction checks") {
  CHECK_THROWS_AS(Texture(0, 4, 1), DimensionError);
  CHECK_THROWS_AS(Texture(4, 4, 2), UnsupportedFormatError);
  CHECK_THROWS_AS(Texture(2, 2, 1, std::vector<float>(3)), DimensionError);
  const Texture t(3, 2, 3, 0.25f);
  CHECK(t.samples().size() == 18);
  CHECK(t.all_finite());
}

TEST_CASE("png: decoding") {
  testutil::TempDir dir;
  write_bytes(dir / "g.png", kGray8Value255);
  const Texture g = load_texture(dir / "g.png");
  CHECK(g.channels() == 1);
  CHECK(g.at(0, 0) == 1.0f);

  write_bytes(dir / "g16.png", kGray16);
  const Texture g16 = load_png(dir / "g16.png");
  CHECK(g16.width() == 2);
  CHECK(g16.at(0, 0) == static_cast<float>(0x1234 / 65535.0));
  CHECK(g16.at(1, 0) == 1.0f);

  write_bytes(dir / "rgba.png", kRgba8);
  CHECK_THROWS_AS(load_texture(dir / "rgba.png"), UnsupportedFormatError);

  testutil::write_file(dir / "junk.png", "not a png at all");
  CHECK_THROWS_AS(load_png(dir / "junk.png"), DataError);
  CHECK_THROWS_AS(load_png(dir / "absent.png"), IoError);
  CHECK_THROWS_AS(load_texture(dir / "image.exr"), UnsupportedFormatError);
}

TEST_CASE("png: 16-bit round trip within one code value") {
  testutil::TempDir dir;
  std::mt19937_64 rng(1);
  const Texture t = testutil::random_texture(rng, 7, 5, 3);
  save_png(t, dir / "t.png", PngDepth::bits16);
  const Texture r = load_png(dir / "t.png");
  REQUIRE(r.same_shape(t));
  for (std::size_t i = 0; i < t.samples().size(); ++i)
    CHECK(std::abs(r.samples()[i] - t.samples()[i]) <= 0.5 / 65535.0 + 1e-7);

  save_png(t, dir / "t8.png");
  const Texture r8 = load_png(dir / "t8.png");
  for (std::size_t i = 0; i < t.samples().size(); ++i)
    CHECK(std::abs(r8.samples()[i] - t.samples()[i]) <= 0.5 / 255.0 + 1e-7);
}

TEST_CASE("pfm: lossless round trip and orientation") {
  testutil::TempDir dir;
  std::mt19937_64 rng(2);
  for (const int channels : {1, 3}) {
    const Texture t = testutil::random_texture(rng, 9, 4, channels, -100.0f, 100.0f);
    save_texture(t, dir / "t.pfm");
    CHECK(identical(load_texture(dir / "t.pfm"), t));
  }
  // Bottom-to-top storage: the first stored row is the last image row.
  Texture t(1, 2, 1);
  t.at(0, 0) = 1.0f;
  t.at(0, 1) = 2.0f;
  save_pfm(t, dir / "o.pfm");
  const std::string bytes = testutil::read_file(dir / "o.pfm");
  CHECK(bytes.rfind("Pf\n1 2\n-1.0\n", 0) == 0);
  float first = 0;
  std::memcpy(&first, bytes.data() + std::strlen("Pf\n1 2\n-1.0\n"), 4);
  CHECK(first == 2.0f);

  testutil::write_file(dir / "bad.pfm", "PX\n1 1\n-1.0\n");
  CHECK_THROWS_AS(load_pfm(dir / "bad.pfm"), DataError);
  testutil::write_file(dir / "short.pfm", "Pf\n4 4\n-1.0\nabc");
  CHECK_THROWS_AS(load_pfm(dir / "short.pfm"), DataError);
}

TEST_CASE("pfm: big-endian files are byte-swapped") {
  testutil::TempDir dir;
  const unsigned char be_one[] = {0x3f, 0x80, 0x00, 0x00};  // 1.0f big-endian
  testutil::write_file(dir / "be.pfm",
                       std::string("Pf\n1 1\n1.0\n") + std::string(reinterpret_cast<const char*>(be_one), 4));
  CHECK(load_pfm(dir / "be.pfm").at(0, 0) == 1.0f);
}

TEST_CASE("lerp_textures") {
  const Texture a = constant(2, 2, 3, 0.2f);
  const Texture b = constant(2, 2, 3, 0.6f);
  CHECK(identical(lerp_textures(a, b, constant(2, 2, 1, 0.0f)), a));
  CHECK(identical(lerp_textures(a, b, constant(2, 2, 1, 1.0f)), b));
  const Texture mid = lerp_textures(a, b, constant(2, 2, 1, 0.5f));
  for (const float v : mid.samples())
    CHECK(v == doctest::Approx(0.4));
  CHECK_THROWS_AS(lerp_textures(a, constant(2, 3, 3, 0), constant(2, 2, 1, 0)), DimensionError);
  CHECK_THROWS_AS(lerp_textures(a, b, constant(3, 2, 1, 0)), DimensionError);

  std::mt19937_64 rng(4);
  const Texture x = testutil::random_texture(rng, 5, 5, 3);
  const Texture w = testutil::random_texture(rng, 5, 5, 1);
  CHECK(identical(lerp_textures(x, x, w), x));
}

TEST_CASE("mse") {
  CHECK(mse(constant(3, 3, 1, 0.5f), constant(3, 3, 1, 0.5f)) == 0.0);
  CHECK(mse(constant(3, 3, 3, 0.0f), constant(3, 3, 3, 1.0f)) == 1.0);
  Texture a(2, 1, 1, 0.0f);
  Texture b(2, 1, 1);
  b.at(0, 0) = 0.3f;
  b.at(1, 0) = 0.4f;
  CHECK(mse(a, b) == doctest::Approx(0.125).epsilon(1e-7));
  CHECK_THROWS_AS(mse(a, constant(2, 1, 3, 0)), DimensionError);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const Texture x = testutil::random_texture(rng, 4, 4, 3);
    const Texture y = testutil::random_texture(rng, 4, 4, 3);
    CHECK(mse(x, y) == mse(y, x));
    CHECK(mse(x, y) > 0.0);
  }
}
