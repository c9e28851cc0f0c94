#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "support/oracles.hpp"
#include "uwdepth/manifest.hpp"
#include "uwdepth/png_io.hpp"

namespace uwdepth {
namespace {

using testing::TempDir;

TEST(RgbImage, RejectsOutOfRangeChannels) {
  EXPECT_THROW(RgbImage(1, 1, {Rgb{1.5, 0, 0}}), InvalidArgument);
  EXPECT_THROW(RgbImage(1, 1, {Rgb{0, -0.1, 0}}), InvalidArgument);
  EXPECT_THROW(RgbImage(2, 1, {Rgb{}}), InvalidArgument);
  EXPECT_THROW(RgbImage(0, 1, {}), InvalidArgument);
}

TEST(DepthMap, Invariants) {
  EXPECT_THROW(DepthMap(1, 1, {1.2}), InvalidArgument);
  EXPECT_THROW(DepthMap(1, 1, {0.5}, 0.0), InvalidArgument);
  // Invalid pixels may hold anything finite or not; they are never read.
  const DepthMap m(2, 1, {7.0, 0.5}, {0, 1});
  EXPECT_EQ(m.valid_count(), 1u);
  EXPECT_FALSE(m.is_valid(std::size_t{0}));
}

TEST(LoadRgb, EightBitScaling) {
  TempDir dir("rgb8");
  write_png(dir / "a.png", PngRaster{1, 1, 3, 8, {255, 0, 128}});
  const RgbImage img = load_rgb(dir / "a.png");
  ASSERT_EQ(img.width(), 1);
  EXPECT_EQ(img[0].r, 1.0);
  EXPECT_EQ(img[0].g, 0.0);
  EXPECT_DOUBLE_EQ(img[0].b, 128.0 / 255.0);
}

TEST(LoadRgb, SixteenBitSaturation) {
  TempDir dir("rgb16");
  write_png(dir / "a.png", PngRaster{1, 1, 3, 16, {65535, 65535, 65535}});
  const RgbImage img = load_rgb(dir / "a.png");
  EXPECT_EQ(img[0], (Rgb{1.0, 1.0, 1.0}));
}

TEST(LoadRgb, GrayscaleIsFormatError) {
  TempDir dir("gray");
  write_png(dir / "g.png", PngRaster{1, 1, 1, 8, {10}});
  EXPECT_THROW(load_rgb(dir / "g.png"), FormatError);
}

TEST(LoadRgb, MissingAndGarbage) {
  TempDir dir("bad");
  EXPECT_THROW(load_rgb(dir / "missing.png"), IoError);
  {
    std::ofstream f(dir / "junk.png", std::ios::binary);
    f << "definitely not a png";
  }
  EXPECT_THROW(load_rgb(dir / "junk.png"), FormatError);
  // Valid signature, truncated body.
  write_png(dir / "ok.png", PngRaster{4, 4, 3, 8, std::vector<std::uint16_t>(48, 9)});
  std::ifstream in(dir / "ok.png", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  {
    std::ofstream f(dir / "trunc.png", std::ios::binary);
    f << bytes.substr(0, 40);
  }
  EXPECT_THROW(load_rgb(dir / "trunc.png"), FormatError);
}

TEST(LoadRgb, RandomFilesStayInRange) {
  TempDir dir("fuzz");
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 17);
    const int h = 1 + static_cast<int>(rng() % 17);
    const int depth = trial % 2 ? 16 : 8;
    PngRaster r{w, h, 3, depth, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h * 3)};
    for (auto& s : r.samples) s = static_cast<std::uint16_t>(rng() % (depth == 16 ? 65536 : 256));
    write_png(dir / "f.png", r);
    const RgbImage img = load_rgb(dir / "f.png");
    for (const Rgb& p : img.pixels()) {
      for (double v : {p.r, p.g, p.b}) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
      }
    }
  }
}

TEST(LoadDepth, SentinelAndScaling) {
  TempDir dir("depth");
  write_png(dir / "d.png", PngRaster{3, 1, 1, 16, {65535, 0, 32768}});
  const DepthMap m = load_depth(dir / "d.png", 12.5);
  EXPECT_EQ(m.depth()[0], 1.0);
  EXPECT_TRUE(m.is_valid(std::size_t{0}));
  EXPECT_FALSE(m.is_valid(std::size_t{1}));
  EXPECT_NEAR(m.depth()[2], 0.5000076295109483, 1e-15);
  EXPECT_EQ(m.depth_scale(), 12.5);
}

TEST(LoadDepth, RejectsEightBitOrColor) {
  TempDir dir("depthfmt");
  write_png(dir / "d8.png", PngRaster{1, 1, 1, 8, {3}});
  write_png(dir / "rgb.png", PngRaster{1, 1, 3, 16, {3, 3, 3}});
  EXPECT_THROW(load_depth(dir / "d8.png"), FormatError);
  EXPECT_THROW(load_depth(dir / "rgb.png"), FormatError);
}

TEST(SaveDepth, HalfRoundsUp) {
  TempDir dir("half");
  save_depth(DepthMap(1, 1, {0.5}), dir / "h.png");
  EXPECT_EQ(read_png(dir / "h.png").samples[0], 32768);
}

TEST(SaveDepth, AllInvalidWritesZeros) {
  TempDir dir("zeros");
  save_depth(DepthMap(3, 2, std::vector<double>(6, 0.4), std::vector<std::uint8_t>(6, 0)),
             dir / "z.png");
  const PngRaster r = read_png(dir / "z.png");
  for (auto s : r.samples) EXPECT_EQ(s, 0);
}

TEST(SaveDepth, ValidZeroDepthSurvivesReload) {
  TempDir dir("zero");
  save_depth(DepthMap(1, 1, {0.0}), dir / "z.png");
  const DepthMap back = load_depth(dir / "z.png");
  EXPECT_TRUE(back.is_valid(std::size_t{0}));
  EXPECT_LE(back.depth()[0], 1.0 / 65535.0);
}

// Property: round trip error within one quantization step, mask preserved.
TEST(SaveDepth, RoundTripProperty) {
  TempDir dir("roundtrip");
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const DepthMap m = testing::random_depth(rng, 13 + trial, 7, 0.3, 0.0);
    save_depth(m, dir / "r.png");
    const DepthMap back = load_depth(dir / "r.png");
    ASSERT_TRUE(std::equal(m.valid().begin(), m.valid().end(), back.valid().begin()));
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m.is_valid(k)) ASSERT_LE(std::abs(back.depth()[k] - m.depth()[k]), 1.0 / 65535.0);
    }
  }
}

TEST(Manifest, ParsesDirectiveQuotesAndRelativePaths) {
  const DatasetManifest m = parse_manifest(
      "# depth_scale = 20\n# free comment\nrgb,depth\na.png, b.png\n\"c,1.png\",d.png\n", "/data");
  EXPECT_EQ(m.depth_scale, 20.0);
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(m.entries[0].rgb, std::filesystem::path("/data/a.png"));
  EXPECT_EQ(m.entries[0].depth, std::filesystem::path("/data/b.png"));
  EXPECT_EQ(m.entries[1].rgb, std::filesystem::path("/data/c,1.png"));
  EXPECT_FALSE(m.entries[0].pred.has_value());
}

TEST(Manifest, PredColumnAndAbsolutePaths) {
  const DatasetManifest m = parse_manifest("rgb,depth,pred\n/x/a.png,b.png,p.png\n", "/base");
  EXPECT_EQ(m.depth_scale, 1.0);
  EXPECT_EQ(m.entries[0].rgb, std::filesystem::path("/x/a.png"));
  EXPECT_EQ(*m.entries[0].pred, std::filesystem::path("/base/p.png"));
}

TEST(Manifest, Errors) {
  EXPECT_THROW(parse_manifest("", "."), FormatError);
  EXPECT_THROW(parse_manifest("image,depth\n", "."), FormatError);
  EXPECT_THROW(parse_manifest("rgb,depth\na.png\n", "."), FormatError);
  EXPECT_THROW(parse_manifest("# depth_scale = -1\nrgb,depth\n", "."), FormatError);
  EXPECT_THROW(read_manifest("/nonexistent/manifest.csv"), IoError);
}

TEST(Manifest, WriteThenReadAndPairDimensionCheck) {
  TempDir dir("manifest");
  save_rgb(RgbImage(2, 2, std::vector<Rgb>(4, Rgb{0.1, 0.2, 0.3})), dir / "a.png");
  save_depth(DepthMap::constant(2, 2, 0.5), dir / "a_d.png");
  save_depth(DepthMap::constant(3, 2, 0.5), dir / "bad_d.png");
  DatasetManifest m;
  m.depth_scale = 3.5;
  m.entries.push_back({"a.png", "a_d.png", std::nullopt});
  m.entries.push_back({"a.png", "bad_d.png", std::nullopt});
  write_manifest(m, dir / "m.csv");

  const DatasetManifest back = read_manifest(dir / "m.csv");
  EXPECT_EQ(back.depth_scale, 3.5);
  ASSERT_EQ(back.entries.size(), 2u);
  const RgbdPair pair = load_pair(back.entries[0], back.depth_scale);
  EXPECT_EQ(pair.depth.depth_scale(), 3.5);
  EXPECT_THROW(load_pair(back.entries[1], back.depth_scale), DimensionMismatch);
}

TEST(LoadMask, NonzeroIsSalient) {
  TempDir dir("mask");
  write_png(dir / "m.png", PngRaster{3, 1, 1, 8, {0, 1, 255}});
  const Plane mask = load_mask(dir / "m.png");
  EXPECT_EQ(mask[0], 0.0);
  EXPECT_EQ(mask[1], 1.0);
  EXPECT_EQ(mask[2], 1.0);
}

}  // namespace
}  // namespace uwdepth
