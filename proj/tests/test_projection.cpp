#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <random>

#include "support/oracles.hpp"
#include "uwdepth/ifm.hpp"
#include "uwdepth/projection.hpp"
#include "uwdepth/rmi.hpp"

namespace uwdepth {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

RmiImage rmi_of(std::vector<Rmi> px, int width) {
  const int height = static_cast<int>(px.size()) / width;
  return RmiImage(width, height, std::move(px));
}

// Planted data: depth = mu . (1, r, m) on random RMI pixels.
struct Planted {
  RmiImage rmi;
  DepthMap depth;
};

Planted planted(std::mt19937_64& rng, int width, int height, const std::array<double, 3>& mu) {
  const RgbImage img = testing::random_rgb(rng, width, height);
  RmiImage rmi = rmi_transform(img);
  std::vector<double> d(rmi.size());
  std::vector<std::uint8_t> valid(rmi.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double v = mu[0] + mu[1] * rmi[k].r + mu[2] * rmi[k].m;
    valid[k] = v >= 0.0 && v <= 1.0;
    d[k] = valid[k] ? v : 0.0;
  }
  return Planted{std::move(rmi), DepthMap(width, height, std::move(d), std::move(valid))};
}

// Independent route: Householder QR on the explicit design matrix.
std::array<double, 3> dense_solve(const RmiImage& rmi, const DepthMap& depth) {
  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < rmi.size(); ++k) {
    if (depth.is_valid(k)) rows.push_back(k);
  }
  Eigen::MatrixXd x(rows.size(), 3);
  Eigen::VectorXd y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = rmi[rows[i]].r;
    x(i, 2) = rmi[rows[i]].m;
    y(i) = depth.depth()[rows[i]];
  }
  const Eigen::Vector3d mu = x.colPivHouseholderQr().solve(y);
  return {mu(0), mu(1), mu(2)};
}

TEST(Accumulate, AllInvalidLeavesEmpty) {
  const RmiImage rmi = rmi_of({Rmi{0.1, 0.2, 0.3}, Rmi{0.4, 0.5, 0.6}}, 2);
  const FitAccumulator acc =
      accumulate(FitAccumulator{}, rmi, DepthMap(2, 1, {0.3, 0.3}, {0, 0}));
  EXPECT_EQ(acc, FitAccumulator{});
}

TEST(Accumulate, SinglePixelSums) {
  const RmiImage rmi = rmi_transform(RgbImage(1, 1, {Rgb{0.2, 0.5, 0.3}}));
  const FitAccumulator acc = accumulate(FitAccumulator{}, rmi, DepthMap(1, 1, {0.4}));
  EXPECT_EQ(acc.count, 1);
  EXPECT_EQ(acc.xtx[0][0], 1.0);
  EXPECT_NEAR(acc.xty[0], 0.4, 1e-16);
  EXPECT_NEAR(acc.xty[1], 0.08, 1e-16);
  EXPECT_NEAR(acc.xty[2], 0.20, 1e-16);
}

TEST(Accumulate, AdditiveAndSymmetric) {
  std::mt19937_64 rng(2);
  const auto data = planted(rng, 16, 16, {0.5, -0.4, 0.45});
  const FitAccumulator once = accumulate(FitAccumulator{}, data.rmi, data.depth);
  const FitAccumulator twice = accumulate(once, data.rmi, data.depth);
  EXPECT_EQ(twice.count, 2 * once.count);
  EXPECT_EQ(twice.xtx[0][0], static_cast<double>(twice.count));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(twice.xty[i], 2 * once.xty[i], 1e-12);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(twice.xtx[i][j], twice.xtx[j][i]);
      EXPECT_NEAR(twice.xtx[i][j], 2 * once.xtx[i][j], 1e-12);
    }
  }
}

TEST(Accumulate, DimensionMismatch) {
  EXPECT_THROW(accumulate(FitAccumulator{}, rmi_of({Rmi{}}, 1), DepthMap::constant(2, 1, 0.1)),
               DimensionMismatch);
}

TEST(Merge, IdentityAndCommutativity) {
  std::mt19937_64 rng(4);
  const auto a = planted(rng, 8, 8, {0.5, -0.4, 0.45});
  const auto b = planted(rng, 8, 8, {0.5, -0.4, 0.45});
  const FitAccumulator fa = accumulate({}, a.rmi, a.depth);
  const FitAccumulator fb = accumulate({}, b.rmi, b.depth);
  EXPECT_EQ(merge(fa, FitAccumulator{}), fa);
  EXPECT_EQ(merge(fa, fb), merge(fb, fa));
}

// Property: streaming over the concatenated corpus equals sharded accumulate + merge.
TEST(Merge, ShardedEqualsSinglePass) {
  std::mt19937_64 rng(6);
  std::vector<Planted> shards;
  std::vector<Rmi> all_px;
  std::vector<double> all_d;
  std::vector<std::uint8_t> all_v;
  for (int s = 0; s < 4; ++s) {
    shards.push_back(planted(rng, 20, 10, {0.5, -0.4, 0.45}));
    const auto& p = shards.back();
    all_px.insert(all_px.end(), p.rmi.pixels().begin(), p.rmi.pixels().end());
    all_d.insert(all_d.end(), p.depth.depth().begin(), p.depth.depth().end());
    all_v.insert(all_v.end(), p.depth.valid().begin(), p.depth.valid().end());
  }
  const FitAccumulator single = accumulate(
      {}, RmiImage(20, 40, all_px), DepthMap(20, 40, all_d, all_v));
  FitAccumulator merged;
  for (const auto& p : shards) merged = merge(merged, accumulate({}, p.rmi, p.depth));
  EXPECT_EQ(merged.count, single.count);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LE(rel(merged.xty[i], single.xty[i]), 1e-9);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(rel(merged.xtx[i][j], single.xtx[i][j]), 1e-9);
  }
  EXPECT_LE(rel(merged.yty, single.yty), 1e-9);
}

TEST(Solve, RecoversPlantedCoefficients) {
  std::mt19937_64 rng(10);
  const std::array<double, 3> mu{0.5, -0.4, 0.45};
  const auto data = planted(rng, 40, 25, mu);
  const FitAccumulator acc = accumulate({}, data.rmi, data.depth);
  ASSERT_GT(acc.count, 500);
  const ProjectionCoefficients c = solve(acc);
  const auto oracle = dense_solve(data.rmi, data.depth);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(c.mu[i], mu[i], 1e-6);
    EXPECT_NEAR(oracle[i], mu[i], 1e-12);
    EXPECT_NEAR(c.mu[i], oracle[i], 1e-6);
  }
  EXPECT_EQ(c.pixel_count, acc.count);
  EXPECT_DOUBLE_EQ(c.ridge, kRidgePerPixel * static_cast<double>(acc.count));
  EXPECT_LT(c.residual_rmse, 1e-6);
}

TEST(Solve, RankDeficientFallsBackOnRidge) {
  const RmiImage rmi = rmi_of(std::vector<Rmi>(100, Rmi{0, 0, 0}), 10);
  const ProjectionCoefficients c =
      solve(accumulate({}, rmi, DepthMap::constant(10, 10, 0.5)));
  EXPECT_NEAR(c.mu[0], 0.5 / (1.0 + 1e-8), 1e-15);
  EXPECT_NEAR(c.mu[1], 0.0, 1e-15);
  EXPECT_NEAR(c.mu[2], 0.0, 1e-15);
  EXPECT_NEAR(c.residual_rmse, 0.0, 1e-6);
}

TEST(Solve, EmptyAccumulatorThrows) { EXPECT_THROW(solve(FitAccumulator{}), EmptyAccumulator); }

TEST(Solve, OptimalityUnderPerturbation) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    // Noisy targets so the optimum has a positive residual.
    const RgbImage img = testing::random_rgb(rng, 24, 24);
    const RmiImage rmi = rmi_transform(img);
    const DepthMap depth = testing::random_depth(rng, 24, 24, 0.1);
    const FitAccumulator acc = accumulate({}, rmi, depth);
    const ProjectionCoefficients c = solve(acc);
    const double best = sum_squared_residual(acc, c.mu);
    EXPECT_NEAR(std::sqrt(best / acc.count), c.residual_rmse, 1e-9);
    for (double delta : {1e-3, 1e-2}) {
      for (std::size_t i = 0; i < 3; ++i) {
        for (double sign : {-1.0, 1.0}) {
          auto mu = c.mu;
          mu[i] += sign * delta;
          EXPECT_GE(sum_squared_residual(acc, mu), best);
        }
      }
    }
  }
}

TEST(Solve, ScaleCovariance) {
  std::mt19937_64 rng(13);
  const RmiImage rmi = rmi_transform(testing::random_rgb(rng, 30, 30));
  const DepthMap depth = testing::random_depth(rng, 30, 30, 0.2);
  const ProjectionCoefficients base = solve(accumulate({}, rmi, depth));
  for (double c : {0.1, 0.5, 0.9, 1.0}) {
    std::vector<double> scaled(depth.depth().begin(), depth.depth().end());
    for (double& v : scaled) v *= c;
    const DepthMap sd(30, 30, scaled,
                      std::vector<std::uint8_t>(depth.valid().begin(), depth.valid().end()));
    const ProjectionCoefficients s = solve(accumulate({}, rmi, sd));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(rel(s.mu[i], c * base.mu[i]), 1e-6);
  }
}

TEST(PredictCoarse, ReferenceCoefficientArithmetic) {
  const RmiImage rmi = rmi_of({Rmi{0, 0, 0}, Rmi{1, 0, 0}, Rmi{0, 1, 0}}, 3);
  const DepthMap d = predict_coarse(rmi, reference_coefficients());
  EXPECT_NEAR(d.depth()[0], 0.496, 1e-15);
  EXPECT_NEAR(d.depth()[1], 0.107, 1e-15);
  EXPECT_NEAR(d.depth()[2], 0.960, 1e-15);
  EXPECT_EQ(d.valid_count(), 3u);
}

TEST(PredictCoarse, ConstantCoefficientsAndClamp) {
  std::mt19937_64 rng(14);
  const RmiImage rmi = rmi_transform(testing::random_rgb(rng, 9, 9));
  ProjectionCoefficients c;
  c.mu = {0.37, 0.0, 0.0};
  c.depth_scale = 4.0;
  const DepthMap flat = predict_coarse(rmi, c);
  for (double v : flat.depth()) EXPECT_EQ(v, 0.37);
  EXPECT_EQ(flat.depth_scale(), 4.0);

  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    c.mu = {u(rng), u(rng), u(rng)};
    const DepthMap clamped = predict_coarse(rmi, c);
    for (double v : clamped.depth()) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
  c.mu = {std::nan(""), 0, 0};
  EXPECT_THROW(predict_coarse(rmi, c), InvalidArgument);
}

TEST(ProjectionError, Examples) {
  const DepthMap a = DepthMap::constant(2, 2, 0.5);
  EXPECT_EQ(projection_error(a, a).value, 0.0);
  const MaskedMean m = projection_error(a, DepthMap::constant(2, 2, 0.3));
  EXPECT_NEAR(m.value, 0.2, 1e-15);
  EXPECT_EQ(m.count, 4u);

  const DepthMap one_valid(2, 2, {0.4, 0.1, 0.1, 0.1}, {1, 0, 0, 0});
  EXPECT_NEAR(projection_error(DepthMap::constant(2, 2, 0.5), one_valid).value, 0.1, 1e-15);

  const MaskedMean empty =
      projection_error(a, DepthMap(2, 2, std::vector<double>(4, 0.0), std::vector<std::uint8_t>(4, 0)));
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(empty.value, 0.0);
  EXPECT_THROW(projection_error(a, DepthMap::constant(1, 2, 0.5)), DimensionMismatch);
}

TEST(CoefficientsFile, RoundTripAndSchema) {
  testing::TempDir dir("coeffs");
  ProjectionCoefficients c;
  c.mu = {0.1, -0.25, 0.333333333333333};
  c.pixel_count = 12345678901LL;
  c.residual_rmse = 0.0123;
  c.ridge = 123.45678901;
  c.depth_scale = 8.0;
  c.intensity = IntensityDef::kMean;
  write_coefficients(c, dir / "c.json");
  const ProjectionCoefficients back = read_coefficients(dir / "c.json");
  EXPECT_EQ(back.mu, c.mu);
  EXPECT_EQ(back.pixel_count, c.pixel_count);
  EXPECT_EQ(back.residual_rmse, c.residual_rmse);
  EXPECT_EQ(back.ridge, c.ridge);
  EXPECT_EQ(back.depth_scale, 8.0);
  EXPECT_EQ(back.intensity, IntensityDef::kMean);

  std::ifstream in(dir / "c.json");
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  for (const char* key : {"\"mu\"", "\"pixel_count\"", "\"residual_rmse\"", "\"ridge\"",
                          "\"depth_scale\"", "\"intensity_def\": \"mean\""}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(CoefficientsFile, Malformed) {
  testing::TempDir dir("badcoeffs");
  auto write = [&](const std::string& text) {
    std::ofstream(dir / "c.json") << text;
    return dir / "c.json";
  };
  EXPECT_THROW(read_coefficients(write("{")), FormatError);
  EXPECT_THROW(read_coefficients(write("{\"mu\": [1, 2]}")), FormatError);
  EXPECT_THROW(read_coefficients(write("{\"mu\": [1, 2, \"x\"]}")), FormatError);
  EXPECT_THROW(read_coefficients(write("{\"mu\": [1, 2, 3], \"intensity_def\": \"hsv\"}")),
               FormatError);
  EXPECT_THROW(read_coefficients(dir / "missing.json"), IoError);
  EXPECT_EQ(read_coefficients(write("{\"mu\": [1, 2, 3]}")).depth_scale, 1.0);
}

TEST(CoefficientsFile, BundledReferenceValues) {
  const ProjectionCoefficients c = read_coefficients(UWDEPTH_DATA_DIR "/paper_mu.json");
  EXPECT_EQ(c.mu, reference_coefficients().mu);
  EXPECT_EQ(c.mu[0], 0.496);
  EXPECT_EQ(c.mu[1], -0.389);
  EXPECT_EQ(c.mu[2], 0.464);
}

// On a physically formed scene the affine prior orders pixels by depth.
TEST(PredictCoarse, TracksIfmDepthMonotonically) {
  for (auto profile : {DepthProfile::kLinearRamp, DepthProfile::kRadial,
                       DepthProfile::kRandomSmooth}) {
    const auto scene = ifm_make_scene(64, 64, "oceanI", profile, 3);
    const RmiImage rmi = rmi_transform(ifm_synthesize(scene));
    const ProjectionCoefficients c = solve(accumulate({}, rmi, scene.depth));
    const DepthMap pred = predict_coarse(rmi, c);
    EXPECT_GE(testing::spearman(pred.depth(), scene.depth.depth()), 0.9) << profile_name(profile);
    // Red decays fastest: the fitted red weight is negative, as on real water.
    EXPECT_LT(c.mu[1], 0.0);
  }
}

}  // namespace
}  // namespace uwdepth
