#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uwdepth/errors.hpp"
#include "uwdepth/filtering.hpp"
#include "uwdepth/ifm.hpp"
#include "uwdepth/manifest.hpp"
#include "uwdepth/metrics.hpp"
#include "uwdepth/parallel.hpp"
#include "uwdepth/pipeline.hpp"
#include "uwdepth/png_io.hpp"
#include "uwdepth/projection.hpp"
#include "uwdepth/rmi.hpp"

namespace uwdepth::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  int threads = 1;
  std::uint64_t seed = 7;
};

struct FilterOptions {
  int radius = 8;
  double epsilon = 1e-4;
  bool no_filter = false;

  std::optional<GuidedFilterConfig> config() const {
    if (no_filter) return std::nullopt;
    return GuidedFilterConfig{radius, epsilon};
  }
};

void add_filter_flags(CLI::App& cmd, FilterOptions& f) {
  cmd.add_option("--gf-radius", f.radius, "Guided filter window half-width")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--gf-eps", f.epsilon, "Guided filter regularizer")->check(CLI::PositiveNumber);
  cmd.add_flag("--no-filter", f.no_filter, "Skip guided filtering");
}

void require_file(const fs::path& path, const char* what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw IoError(std::string(what) + " '" + path.string() + "' does not exist");
  }
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

std::string format_mu(const std::array<double, 3>& mu) {
  std::ostringstream s;
  s << std::setprecision(9) << "[" << mu[0] << ", " << mu[1] << ", " << mu[2] << "]";
  return s.str();
}

// ---------------------------------------------------------------- fit

struct FitOptions {
  fs::path manifest;
  fs::path out = "coeffs.json";
  std::optional<double> depth_scale;
  std::string intensity = "rec601";
};

int cmd_fit(const GlobalOptions& g, const FitOptions& o, std::ostream& out) {
  require_file(o.manifest, "manifest");
  const IntensityDef intensity = parse_intensity(o.intensity);
  const DatasetManifest manifest = read_manifest(o.manifest);
  if (manifest.entries.empty()) {
    throw EmptyAccumulator("manifest '" + o.manifest.string() + "' lists no images");
  }
  const double depth_scale = o.depth_scale.value_or(manifest.depth_scale);

  // One accumulator per image, merged in manifest order: the result does not
  // depend on the thread count.
  std::vector<FitAccumulator> shards(manifest.entries.size());
  parallel_for(shards.size(), g.threads, [&](std::size_t i) {
    const RgbdPair pair = load_pair(manifest.entries[i], depth_scale);
    shards[i] = accumulate(FitAccumulator{}, rmi_transform(pair.rgb, intensity), pair.depth);
  });
  FitAccumulator total;
  for (const auto& s : shards) total = merge(total, s);

  ProjectionCoefficients coeffs = solve(total);
  coeffs.depth_scale = depth_scale;
  coeffs.intensity = intensity;
  if (!o.out.parent_path().empty()) ensure_directory(o.out.parent_path());
  write_coefficients(coeffs, o.out);

  out << "mu = " << format_mu(coeffs.mu) << '\n'
      << "pixel_count = " << coeffs.pixel_count << '\n'
      << "residual_rmse = " << std::setprecision(9) << coeffs.residual_rmse << '\n'
      << "wrote " << o.out.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- predict

struct PredictOptions {
  fs::path image;
  fs::path coeffs;
  fs::path out = ".";
  std::optional<fs::path> mask;
  std::optional<fs::path> dump_rmi;
  std::optional<double> depth_scale;
  FilterOptions filter;
};

int cmd_predict(const PredictOptions& o, std::ostream& out) {
  require_file(o.image, "image");
  require_file(o.coeffs, "coefficients");
  if (o.mask) require_file(*o.mask, "mask");
  ensure_directory(o.out);

  ProjectionCoefficients coeffs = read_coefficients(o.coeffs);
  if (o.depth_scale) coeffs.depth_scale = *o.depth_scale;
  const RgbImage image = load_rgb(o.image);
  std::optional<Plane> mask;
  if (o.mask) mask = load_mask(*o.mask);

  const CoarseDepthResult result =
      coarse_depth(image, coeffs, o.filter.config(), mask ? &*mask : nullptr);

  const std::string stem = o.image.stem().string();
  const fs::path coarse_path = o.out / (stem + "_coarse.png");
  save_depth(result.coarse, coarse_path);
  out << "wrote " << coarse_path.string() << '\n';
  if (result.filtered) {
    const fs::path filtered_path = o.out / (stem + "_filtered.png");
    save_depth(*result.filtered, filtered_path);
    out << "wrote " << filtered_path.string() << '\n';
  }
  const fs::path vis_path = o.out / (stem + "_vis.png");
  save_depth_visualization(result.final_depth(), vis_path);
  out << "wrote " << vis_path.string() << '\n';
  if (o.dump_rmi) {
    save_rmi(result.rmi, *o.dump_rmi);
    out << "wrote " << o.dump_rmi->string() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  fs::path manifest;
  std::optional<fs::path> coeffs;
  fs::path out = ".";
  std::optional<double> depth_scale;
  bool metric_units = false;
  FilterOptions filter;
};

struct EvalRow {
  std::string name;
  MetricReport report;
};

void write_metric_fields(std::ostream& os, const MetricReport& r) {
  os << std::setprecision(10) << r.abs_rel << ',' << r.sq_rel << ',' << r.rmse << ',' << r.log10
     << ',' << r.valid_pixels;
}

int cmd_eval(const GlobalOptions& g, const EvalOptions& o, std::ostream& out) {
  require_file(o.manifest, "manifest");
  if (o.coeffs) require_file(*o.coeffs, "coefficients");
  ensure_directory(o.out);
  const DatasetManifest manifest = read_manifest(o.manifest);
  const double depth_scale = o.depth_scale.value_or(manifest.depth_scale);

  std::optional<ProjectionCoefficients> coeffs;
  if (o.coeffs) coeffs = read_coefficients(*o.coeffs);
  for (const auto& e : manifest.entries) {
    if (!e.pred && !coeffs) {
      throw InvalidArgument("eval: --coeffs is required when the manifest has no pred column");
    }
  }

  std::vector<EvalRow> rows(manifest.entries.size());
  parallel_for(rows.size(), g.threads, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    rows[i].name = entry.rgb.filename().string();
    std::optional<DepthMap> gt;
    std::optional<DepthMap> pred;
    if (entry.pred) {
      gt = load_depth(entry.depth, depth_scale);
      pred = load_depth(*entry.pred, depth_scale);
      require_same_shape(*pred, *gt, ("prediction " + entry.pred->string()).c_str());
    } else {
      RgbdPair pair = load_pair(entry, depth_scale);
      pred = coarse_depth(pair.rgb, *coeffs, o.filter.config()).final_depth();
      gt = std::move(pair.depth);
    }
    std::vector<std::uint8_t> joint(gt->size());
    for (std::size_t k = 0; k < joint.size(); ++k) {
      joint[k] = gt->is_valid(k) && pred->is_valid(k) ? 1 : 0;
    }
    if (o.metric_units) {
      std::vector<double> p(pred->depth().begin(), pred->depth().end());
      std::vector<double> d(gt->depth().begin(), gt->depth().end());
      for (double& v : p) v *= depth_scale;
      for (double& v : d) v *= depth_scale;
      rows[i].report = evaluate_values(p, d, joint);
    } else {
      rows[i].report = evaluate_values(pred->depth(), gt->depth(), joint);
    }
  });

  std::vector<MetricReport> reports;
  for (const auto& r : rows) reports.push_back(r.report);
  const MetricReport mean = mean_report(reports);

  const fs::path csv_path = o.out / "metrics.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot write '" + csv_path.string() + "'");
  csv << "image,abs_rel,sq_rel,rmse,log10,valid_pixels,status\n";

  out << std::left << std::setw(28) << "image" << std::right << std::setw(11) << "Abs Rel"
      << std::setw(11) << "Sq Rel" << std::setw(11) << "RMSE" << std::setw(11) << "log10"
      << std::setw(10) << "pixels" << '\n';
  auto print_row = [&out](const std::string& name, const MetricReport& r) {
    out << std::left << std::setw(28) << name << std::right << std::fixed << std::setprecision(5)
        << std::setw(11) << r.abs_rel << std::setw(11) << r.sq_rel << std::setw(11) << r.rmse
        << std::setw(11) << r.log10 << std::setw(10) << r.valid_pixels << '\n'
        << std::defaultfloat;
  };
  std::size_t scored = 0;
  for (const auto& row : rows) {
    if (row.report.empty()) {
      out << std::left << std::setw(28) << row.name << "  skipped (no jointly valid pixels)\n";
      csv << row.name << ",,,,,0,skipped\n";
      continue;
    }
    ++scored;
    print_row(row.name, row.report);
    csv << row.name << ',';
    write_metric_fields(csv, row.report);
    csv << ",ok\n";
  }
  print_row("mean", mean);
  csv << "mean,";
  write_metric_fields(csv, mean);
  csv << (scored > 0 ? ",ok\n" : ",empty\n");
  if (!csv) throw IoError("cannot write '" + csv_path.string() + "'");
  out << "wrote " << csv_path.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  fs::path out = ".";
  int width = 64;
  int height = 64;
  int count = 1;
  std::string preset = "oceanI";
  std::string profile = "linear-ramp";
  std::optional<std::vector<double>> planted_mu;
  double depth_scale = 1.0;
};

int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out, std::ostream& err) {
  const DepthProfile profile = parse_profile(o.profile);
  const WaterParams params = water_preset(o.preset);
  for (const auto& w : validate(params)) err << "warning: " << w << '\n';
  if (o.planted_mu && o.planted_mu->size() != 3) {
    throw InvalidArgument("--planted-mu takes exactly three values");
  }
  ensure_directory(o.out);

  nlohmann::ordered_json meta;
  meta["preset"] = o.preset;
  meta["profile"] = o.profile;
  meta["seed"] = g.seed;
  meta["width"] = o.width;
  meta["height"] = o.height;
  meta["count"] = o.count;
  meta["beta"] = params.beta;
  meta["background"] = params.background;
  meta["depth_scale"] = o.depth_scale;
  if (o.planted_mu) meta["planted_mu"] = *o.planted_mu;
  meta["images"] = nlohmann::json::array();

  DatasetManifest manifest;
  manifest.depth_scale = o.depth_scale;
  for (int i = 0; i < o.count; ++i) {
    const std::uint64_t seed = g.seed + static_cast<std::uint64_t>(i);
    const SyntheticScene scene = ifm_make_scene(o.width, o.height, o.preset, profile, seed);
    const std::string suffix = o.count == 1 ? "" : "_" + std::to_string(i);
    const std::string rgb_name = "rgb" + suffix + ".png";
    const std::string depth_name = "depth" + suffix + ".png";
    const std::string clear_name = "clear" + suffix + ".png";

    save_rgb(ifm_synthesize(scene), o.out / rgb_name, 16);
    save_rgb(scene.clear, o.out / clear_name, 16);
    if (o.planted_mu) {
      // Plant depth on the stored (quantized) pixels so the file pair is exactly consistent.
      const RmiImage rmi = rmi_transform(load_rgb(o.out / rgb_name));
      const auto& mu = *o.planted_mu;
      std::vector<double> depth(rmi.size(), 0.0);
      std::vector<std::uint8_t> valid(rmi.size(), 0);
      for (std::size_t k = 0; k < rmi.size(); ++k) {
        const double d = mu[0] + mu[1] * rmi[k].r + mu[2] * rmi[k].m;
        if (d >= 0.0 && d <= 1.0) {
          depth[k] = d;
          valid[k] = 1;
        }
      }
      save_depth(DepthMap(o.width, o.height, std::move(depth), std::move(valid), o.depth_scale),
                 o.out / depth_name);
    } else {
      save_depth(scene.depth, o.out / depth_name);
    }
    meta["images"].push_back(
        {{"rgb", rgb_name}, {"depth", depth_name}, {"clear", clear_name}, {"seed", seed}});
    manifest.entries.push_back(ManifestEntry{rgb_name, depth_name, std::nullopt});
  }
  write_manifest(manifest, o.out / "manifest.csv");
  std::ofstream params_file(o.out / "params.json");
  params_file << meta.dump(2) << '\n';
  if (!params_file) throw IoError("cannot write params.json");
  out << "wrote " << o.count << " scene(s) to " << o.out.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
  BenchConfig config;
  FilterOptions filter;
  std::optional<fs::path> json;
};

int cmd_bench(const GlobalOptions& g, BenchOptions o, std::ostream& out) {
  o.config.filter = !o.filter.no_filter;
  o.config.filter_config = GuidedFilterConfig{o.filter.radius, o.filter.epsilon};
  o.config.seed = g.seed;
  const BenchReport report = run_benchmark(o.config);

  out << "frame " << o.config.width << "x" << o.config.height << ", " << o.config.iterations
      << " iterations (" << o.config.warmup << " warm-up excluded)\n";
  out << std::left << std::setw(18) << "stage" << std::right << std::setw(12) << "mean ms"
      << std::setw(12) << "median ms" << '\n';
  auto line = [&out](const StageTiming& t) {
    out << std::left << std::setw(18) << t.name << std::right << std::fixed
        << std::setprecision(3) << std::setw(12) << t.mean_ms << std::setw(12) << t.median_ms
        << '\n'
        << std::defaultfloat;
  };
  for (const auto& s : report.stages) line(s);
  line(report.end_to_end);
  out << std::fixed << std::setprecision(2) << "fps = " << report.fps
      << "\nstage sum / end-to-end = " << std::setprecision(4) << report.stage_sum_ratio << '\n'
      << std::defaultfloat;

  if (o.json) {
    nlohmann::ordered_json j;
    j["width"] = o.config.width;
    j["height"] = o.config.height;
    j["iterations"] = o.config.iterations;
    j["warmup"] = o.config.warmup;
    j["filter"] = o.config.filter;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : report.stages) {
      j["stages"].push_back({{"name", s.name}, {"mean_ms", s.mean_ms}, {"median_ms", s.median_ms}});
    }
    j["end_to_end"] = {{"mean_ms", report.end_to_end.mean_ms},
                       {"median_ms", report.end_to_end.median_ms}};
    j["fps"] = report.fps;
    j["stage_sum_ratio"] = report.stage_sum_ratio;
    std::ofstream f(*o.json);
    f << j.dump(2) << '\n';
    if (!f) throw IoError("cannot write '" + o.json->string() + "'");
  }
  return kExitOk;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const EmptyAccumulator& e) {
    err << "error: " << e.what() << '\n';
    return kExitEmpty;
  } catch (const EmptyMask& e) {
    err << "error: " << e.what() << '\n';
    return kExitEmpty;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadFlags;
  } catch (const UnknownPreset& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadFlags;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attenuation-prior coarse depth for underwater imagery"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("-j,--threads", global.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", global.seed, "Seed for synthetic data");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the attenuation prior over an RGB-D manifest");
  fit_cmd->add_option("manifest,--manifest", fit.manifest, "Manifest CSV")->required();
  fit_cmd->add_option("--out", fit.out, "Coefficients JSON to write");
  fit_cmd->add_option("--depth-scale", fit.depth_scale, "Meters per normalized depth unit")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--intensity", fit.intensity, "Intensity definition")
      ->check(CLI::IsMember({"rec601", "mean"}));

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Coarse depth for one RGB image");
  predict_cmd->add_option("image,--image", predict.image, "RGB PNG")->required();
  predict_cmd->add_option("--coeffs", predict.coeffs, "Coefficients JSON")->required();
  predict_cmd->add_option("--out", predict.out, "Output directory");
  predict_cmd->add_option("--mask", predict.mask, "Binary guidance mask PNG");
  predict_cmd->add_option("--dump-rmi", predict.dump_rmi, "Write the RMI image as 8-bit PNG");
  predict_cmd->add_option("--depth-scale", predict.depth_scale, "Meters per normalized unit")
      ->check(CLI::PositiveNumber);
  add_filter_flags(*predict_cmd, predict.filter);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  eval_cmd->add_option("manifest,--manifest", eval.manifest, "Manifest CSV")->required();
  eval_cmd->add_option("--coeffs", eval.coeffs, "Coefficients JSON for coarse predictions");
  eval_cmd->add_option("--out", eval.out, "Directory for metrics.csv");
  eval_cmd->add_option("--depth-scale", eval.depth_scale, "Meters per normalized unit")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--metric-units", eval.metric_units,
                     "Report metrics in meters instead of normalized depth");
  add_filter_flags(*eval_cmd, eval.filter);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write synthetic underwater RGB-D scenes");
  synth_cmd->add_option("--out", synth.out, "Output directory");
  synth_cmd->add_option("--width", synth.width)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--height", synth.height)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--count", synth.count, "Number of scenes")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--preset", synth.preset, "Water preset (oceanI, oceanII, coastal)");
  synth_cmd->add_option("--profile", synth.profile, "linear-ramp, radial or random-smooth");
  synth_cmd->add_option("--planted-mu", synth.planted_mu,
                        "Replace depth with mu0 + mu1 R + mu2 M (three values)")
      ->delimiter(',')
      ->expected(3);
  synth_cmd->add_option("--depth-scale", synth.depth_scale)->check(CLI::PositiveNumber);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the coarse depth pipeline");
  bench_cmd->add_option("--width", bench.config.width)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--height", bench.config.height)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--iterations", bench.config.iterations)->check(CLI::Range(10, 1 << 30));
  bench_cmd->add_option("--warmup", bench.config.warmup)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--json", bench.json, "Also write the report as JSON");
  add_filter_flags(*bench_cmd, bench.filter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    }
    return kExitBadFlags;
  }

  return guarded(err, [&]() -> int {
    if (*fit_cmd) return cmd_fit(global, fit, out);
    if (*predict_cmd) return cmd_predict(predict, out);
    if (*eval_cmd) return cmd_eval(global, eval, out);
    if (*synth_cmd) return cmd_synth(global, synth, out, err);
    return cmd_bench(global, bench, out);
  });
}

}  // namespace uwdepth::cli
