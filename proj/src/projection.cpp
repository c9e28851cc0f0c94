#include "uwdepth/projection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

namespace uwdepth {

ProjectionCoefficients reference_coefficients() {
  ProjectionCoefficients c;
  c.mu = {0.496, -0.389, 0.464};
  return c;
}

FitAccumulator accumulate(FitAccumulator acc, const RmiImage& rmi, const DepthMap& depth) {
  require_same_shape(rmi, depth, "accumulate");
  const auto px = rmi.pixels();
  const auto d = depth.depth();
  const auto valid = depth.valid();

  // Per-image partial sums keep each addend small relative to the corpus total.
  double s_r = 0, s_m = 0, s_rr = 0, s_rm = 0, s_mm = 0;
  double s_y = 0, s_ry = 0, s_my = 0, s_yy = 0;
  std::int64_t n = 0;
  for (std::size_t k = 0; k < px.size(); ++k) {
    if (valid[k] == 0) continue;
    const double r = px[k].r;
    const double m = px[k].m;
    const double y = d[k];
    s_r += r;
    s_m += m;
    s_rr += r * r;
    s_rm += r * m;
    s_mm += m * m;
    s_y += y;
    s_ry += r * y;
    s_my += m * y;
    s_yy += y * y;
    ++n;
  }

  acc.xtx[0][0] += static_cast<double>(n);
  acc.xtx[0][1] += s_r;
  acc.xtx[0][2] += s_m;
  acc.xtx[1][1] += s_rr;
  acc.xtx[1][2] += s_rm;
  acc.xtx[2][2] += s_mm;
  acc.xtx[1][0] = acc.xtx[0][1];
  acc.xtx[2][0] = acc.xtx[0][2];
  acc.xtx[2][1] = acc.xtx[1][2];
  acc.xty[0] += s_y;
  acc.xty[1] += s_ry;
  acc.xty[2] += s_my;
  acc.yty += s_yy;
  acc.count += n;
  return acc;
}

FitAccumulator merge(const FitAccumulator& a, const FitAccumulator& b) noexcept {
  FitAccumulator out;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) out.xtx[i][j] = a.xtx[i][j] + b.xtx[i][j];
    out.xty[i] = a.xty[i] + b.xty[i];
  }
  out.yty = a.yty + b.yty;
  out.count = a.count + b.count;
  return out;
}

double sum_squared_residual(const FitAccumulator& acc, const std::array<double, 3>& mu) noexcept {
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    lin += mu[i] * acc.xty[i];
    for (std::size_t j = 0; j < 3; ++j) quad += mu[i] * acc.xtx[i][j] * mu[j];
  }
  return acc.yty - 2.0 * lin + quad;
}

ProjectionCoefficients solve(const FitAccumulator& acc) {
  if (acc.count <= 0) {
    throw EmptyAccumulator("solve: no valid pixels were accumulated");
  }
  const double ridge = kRidgePerPixel * static_cast<double>(acc.count);
  std::array<std::array<double, 3>, 3> a = acc.xtx;
  for (std::size_t i = 0; i < 3; ++i) a[i][i] += ridge;

  // Cholesky a = L L^T.
  std::array<std::array<double, 3>, 3> l{};
  for (std::size_t j = 0; j < 3; ++j) {
    double diag = a[j][j];
    for (std::size_t k = 0; k < j; ++k) diag -= l[j][k] * l[j][k];
    if (!(diag > 0.0)) {
      throw InvalidArgument("solve: normal equations are not positive definite");
    }
    l[j][j] = std::sqrt(diag);
    for (std::size_t i = j + 1; i < 3; ++i) {
      double v = a[i][j];
      for (std::size_t k = 0; k < j; ++k) v -= l[i][k] * l[j][k];
      l[i][j] = v / l[j][j];
    }
  }
  std::array<double, 3> z{};
  for (std::size_t i = 0; i < 3; ++i) {
    double v = acc.xty[i];
    for (std::size_t k = 0; k < i; ++k) v -= l[i][k] * z[k];
    z[i] = v / l[i][i];
  }
  std::array<double, 3> mu{};
  for (std::size_t ii = 3; ii-- > 0;) {
    double v = z[ii];
    for (std::size_t k = ii + 1; k < 3; ++k) v -= l[k][ii] * mu[k];
    mu[ii] = v / l[ii][ii];
  }

  ProjectionCoefficients out;
  out.mu = mu;
  out.pixel_count = acc.count;
  out.ridge = ridge;
  const double sse = std::max(0.0, sum_squared_residual(acc, mu));
  out.residual_rmse = std::sqrt(sse / static_cast<double>(acc.count));
  return out;
}

DepthMap predict_coarse(const RmiImage& rmi, const ProjectionCoefficients& coeffs) {
  const auto [m0, m1, m2] = coeffs.mu;
  if (!std::isfinite(m0) || !std::isfinite(m1) || !std::isfinite(m2)) {
    throw InvalidArgument("predict_coarse: coefficients must be finite");
  }
  const auto px = rmi.pixels();
  std::vector<double> depth(px.size());
  for (std::size_t k = 0; k < px.size(); ++k) {
    depth[k] = std::clamp(m0 + m1 * px[k].r + m2 * px[k].m, 0.0, 1.0);
  }
  return DepthMap(rmi.width(), rmi.height(), std::move(depth), coeffs.depth_scale);
}

MaskedMean projection_error(const DepthMap& coarse, const DepthMap& predicted) {
  require_same_shape(coarse, predicted, "projection_error");
  const auto a = coarse.depth();
  const auto b = predicted.depth();
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!coarse.is_valid(k) || !predicted.is_valid(k)) continue;
    sum += std::abs(a[k] - b[k]);
    ++n;
  }
  return MaskedMean{n > 0 ? sum / static_cast<double>(n) : 0.0, n};
}

void write_coefficients(const ProjectionCoefficients& coeffs, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["mu"] = coeffs.mu;
  j["pixel_count"] = coeffs.pixel_count;
  j["residual_rmse"] = coeffs.residual_rmse;
  j["ridge"] = coeffs.ridge;
  j["depth_scale"] = coeffs.depth_scale;
  j["intensity_def"] = intensity_name(coeffs.intensity);
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write coefficients '" + path.string() + "'");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw IoError("cannot write coefficients '" + path.string() + "'");
  }
}

ProjectionCoefficients read_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open coefficients '" + path.string() + "'");
  }
  const std::string where = "coefficients '" + path.string() + "': ";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(where + e.what());
  }
  if (!j.is_object() || !j.contains("mu") || !j["mu"].is_array() || j["mu"].size() != 3) {
    throw FormatError(where + "\"mu\" must be an array of three numbers");
  }
  ProjectionCoefficients c;
  try {
    for (std::size_t i = 0; i < 3; ++i) {
      if (!j["mu"][i].is_number()) throw FormatError(where + "\"mu\" entries must be numbers");
      c.mu[i] = j["mu"][i].get<double>();
    }
    c.pixel_count = j.value("pixel_count", std::int64_t{0});
    c.residual_rmse = j.value("residual_rmse", 0.0);
    c.ridge = j.value("ridge", 0.0);
    c.depth_scale = j.value("depth_scale", 1.0);
    c.intensity = parse_intensity(j.value("intensity_def", std::string("rec601")));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(where + e.what());
  }
  if (!(c.depth_scale > 0.0)) {
    throw FormatError(where + "depth_scale must be positive");
  }
  return c;
}

}  // namespace uwdepth
