#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uwdepth/image.hpp"

namespace uwdepth {

struct ManifestEntry {
  std::filesystem::path rgb;
  std::filesystem::path depth;
  /// Precomputed prediction to score instead of the coarse prior (optional `pred` column).
  std::optional<std::filesystem::path> pred;
};

/// Ordered RGB-D pairs read from a CSV manifest.
///
/// Layout:
///
///     # depth_scale = 10.0
///     rgb,depth
///     frames/0001.png,depth/0001.png
///
/// The `# depth_scale` directive is optional (default 1.0) and may appear
/// anywhere before the header; other `#` lines are comments. A third `pred`
/// column is allowed. Relative paths resolve against the manifest's directory.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  double depth_scale = 1.0;
};

/// Throws IoError if unreadable, FormatError on a malformed header or row.
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Parses manifest text; relative paths resolve against `base_dir`.
DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);

/// Entries paths are written as given (callers pass paths relative to the file).
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct RgbdPair {
  RgbImage rgb;
  DepthMap depth;
};

/// Loads one entry; throws DimensionMismatch if the two images differ in size.
RgbdPair load_pair(const ManifestEntry& entry, double depth_scale);

}  // namespace uwdepth
