#include "uwdepth/manifest.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "uwdepth/png_io.hpp"

namespace uwdepth {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) {
    throw FormatError("manifest line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(was_quoted ? current : trim(current));
  return fields;
}

std::optional<double> parse_directive(const std::string& comment, int line_no) {
  std::string body = trim(comment.substr(1));
  const std::string key = "depth_scale";
  if (body.compare(0, key.size(), key) != 0) return std::nullopt;
  body = trim(body.substr(key.size()));
  if (body.empty() || (body[0] != '=' && body[0] != ':')) return std::nullopt;
  body = trim(body.substr(1));
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc{} || ptr != body.data() + body.size() || !(value > 0.0)) {
    throw FormatError("manifest line " + std::to_string(line_no) +
                      ": depth_scale must be a positive number");
  }
  return value;
}

std::filesystem::path resolve(const std::string& field, const std::filesystem::path& base) {
  std::filesystem::path p(field);
  return p.is_absolute() ? p : base / p;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  DatasetManifest manifest;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::size_t columns = 0;
  bool has_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped[0] == '#') {
      if (!has_header) {
        if (auto scale = parse_directive(stripped, line_no)) manifest.depth_scale = *scale;
      }
      continue;
    }
    const auto fields = split_record(stripped, line_no);
    if (!has_header) {
      const bool two = fields.size() == 2 && fields[0] == "rgb" && fields[1] == "depth";
      const bool three =
          fields.size() == 3 && fields[0] == "rgb" && fields[1] == "depth" && fields[2] == "pred";
      if (!two && !three) {
        throw FormatError("manifest line " + std::to_string(line_no) +
                          ": expected header 'rgb,depth' or 'rgb,depth,pred'");
      }
      columns = fields.size();
      has_header = true;
      continue;
    }
    if (fields.size() != columns) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": expected " +
                        std::to_string(columns) + " fields, found " +
                        std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      if (f.empty()) {
        throw FormatError("manifest line " + std::to_string(line_no) + ": empty path");
      }
    }
    ManifestEntry entry{resolve(fields[0], base_dir), resolve(fields[1], base_dir), std::nullopt};
    if (columns == 3) entry.pred = resolve(fields[2], base_dir);
    manifest.entries.push_back(std::move(entry));
  }
  if (!has_header) {
    throw FormatError("manifest has no 'rgb,depth' header");
  }
  return manifest;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open manifest '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path.parent_path());
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write manifest '" + path.string() + "'");
  }
  const bool with_pred = !manifest.entries.empty() && manifest.entries.front().pred.has_value();
  std::array<char, 32> scale{};
  const auto res = std::to_chars(scale.data(), scale.data() + scale.size(), manifest.depth_scale);
  out << "# depth_scale = " << std::string_view(scale.data(), res.ptr) << '\n';
  out << (with_pred ? "rgb,depth,pred\n" : "rgb,depth\n");
  for (const auto& e : manifest.entries) {
    out << quote_if_needed(e.rgb.generic_string()) << ','
        << quote_if_needed(e.depth.generic_string());
    if (with_pred) out << ',' << quote_if_needed(e.pred.value_or("").generic_string());
    out << '\n';
  }
  if (!out) {
    throw IoError("cannot write manifest '" + path.string() + "'");
  }
}

RgbdPair load_pair(const ManifestEntry& entry, double depth_scale) {
  RgbImage rgb = load_rgb(entry.rgb);
  DepthMap depth = load_depth(entry.depth, depth_scale);
  require_same_shape(rgb, depth, ("pair " + entry.rgb.string()).c_str());
  return RgbdPair{std::move(rgb), std::move(depth)};
}

}  // namespace uwdepth
