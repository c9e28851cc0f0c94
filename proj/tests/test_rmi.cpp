#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "uwdepth/rmi.hpp"

namespace uwdepth {
namespace {

TEST(RmiTransform, LumaExample) {
  const RmiImage out = rmi_transform(RgbImage(1, 1, {Rgb{0.2, 0.5, 0.3}}));
  EXPECT_EQ(out[0].r, 0.2);
  EXPECT_EQ(out[0].m, 0.5);
  EXPECT_NEAR(out[0].i, 0.3875, 1e-15);
}

TEST(RmiTransform, GrayAndBlack) {
  for (double c : {0.0, 0.1, 1.0 / 3.0, 0.7, 1.0}) {
    const Rmi p = rmi_pixel(Rgb{c, c, c});
    EXPECT_EQ(p, (Rmi{c, c, c})) << c;
    EXPECT_EQ(rmi_pixel(Rgb{c, c, c}, IntensityDef::kMean), (Rmi{c, c, c})) << c;
  }
}

TEST(RmiTransform, MeanIntensityAlternate) {
  EXPECT_NEAR(rmi_pixel(Rgb{0.3, 0.6, 0.9}, IntensityDef::kMean).i, 0.6, 1e-15);
  EXPECT_EQ(parse_intensity("mean"), IntensityDef::kMean);
  EXPECT_THROW(parse_intensity("hsv"), InvalidArgument);
}

TEST(RmiTransform, ChannelInvariantsOnRandomImages) {
  std::mt19937_64 rng(3);
  const RgbImage img = testing::random_rgb(rng, 40, 30);
  const RmiImage out = rmi_transform(img);
  ASSERT_TRUE(out.same_shape(img));
  for (std::size_t k = 0; k < img.size(); ++k) {
    const Rgb& s = img[k];
    const Rmi& p = out[k];
    ASSERT_EQ(p.r, s.r);
    ASSERT_GE(p.m, s.g);
    ASSERT_GE(p.m, s.b);
    ASSERT_TRUE(p.m == s.g || p.m == s.b);
    ASSERT_GE(p.i, std::min({s.r, s.g, s.b}));
    ASSERT_LE(p.i, std::max({s.r, s.g, s.b}));
    ASSERT_GE(p.i, 0.0);
    ASSERT_LE(p.i, 1.0);
  }
}

TEST(RmiTransform, PixelLocalUnderPermutation) {
  std::mt19937_64 rng(8);
  const RgbImage img = testing::random_rgb(rng, 16, 16);
  std::vector<std::size_t> perm(img.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Rgb> shuffled(img.size());
  for (std::size_t k = 0; k < perm.size(); ++k) shuffled[k] = img[perm[k]];
  const RmiImage a = rmi_transform(img);
  const RmiImage b = rmi_transform(RgbImage(16, 16, shuffled));
  for (std::size_t k = 0; k < perm.size(); ++k) ASSERT_EQ(b[k], a[perm[k]]);
}

TEST(RmiTransform, MonotoneInRed) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double g = u(rng), b = u(rng);
    double r0 = u(rng), r1 = u(rng);
    if (r0 > r1) std::swap(r0, r1);
    const Rmi lo = rmi_pixel(Rgb{r0, g, b});
    const Rmi hi = rmi_pixel(Rgb{r1, g, b});
    ASSERT_LE(lo.r, hi.r);
    ASSERT_LE(lo.i, hi.i);
  }
}

TEST(IntensityPlane, ExtractsIChannel) {
  const RmiImage out = rmi_transform(RgbImage(2, 1, {Rgb{0.2, 0.5, 0.3}, Rgb{1, 1, 1}}));
  const Plane p = intensity_plane(out);
  EXPECT_EQ(p[0], out[0].i);
  EXPECT_EQ(p[1], 1.0);
}

}  // namespace
}  // namespace uwdepth
