#include "uwdepth/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "uwdepth/colormap.hpp"

namespace uwdepth {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngMessage {
  char text[256] = {};
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* message = static_cast<PngMessage*>(png_get_error_ptr(png));
  if (message != nullptr) {
    std::snprintf(message->text, sizeof(message->text), "%s", msg);
  }
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct DecodeHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int bit_depth = 0;
};

// No object with a non-trivial destructor may live in this frame: libpng
// reports errors by longjmp-ing back to the setjmp below.
bool decode_png(std::FILE* file, DecodeHeader* header, std::vector<png_byte>* bytes,
                std::vector<png_bytep>* rows, PngMessage* message) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, message, on_png_error, on_png_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, file);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int file_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && file_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  header->width = png_get_image_width(png, info);
  header->height = png_get_image_height(png, info);
  header->channels = png_get_channels(png, info);
  header->bit_depth = png_get_bit_depth(png, info);

  const std::size_t stride = png_get_rowbytes(png, info);
  bytes->resize(stride * header->height);
  rows->resize(header->height);
  for (png_uint_32 y = 0; y < header->height; ++y) {
    (*rows)[y] = bytes->data() + stride * y;
  }
  png_read_image(png, rows->data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool encode_png(std::FILE* file, const PngRaster* raster, std::vector<png_bytep>* rows,
                PngMessage* message) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, message, on_png_error, on_png_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  static constexpr std::array<int, 5> kColorTypes = {
      0, PNG_COLOR_TYPE_GRAY, PNG_COLOR_TYPE_GRAY_ALPHA, PNG_COLOR_TYPE_RGB,
      PNG_COLOR_TYPE_RGB_ALPHA};
  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(raster->width),
               static_cast<png_uint_32>(raster->height), raster->bit_depth,
               kColorTypes[static_cast<std::size_t>(raster->channels)], PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 3);
  png_write_info(png, info);
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode));
  if (!file) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  return file;
}

std::uint16_t quantize(double v, double max_value) {
  return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * max_value));
}

}  // namespace

PngRaster read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  std::array<png_byte, 8> signature{};
  if (std::fread(signature.data(), 1, signature.size(), file.get()) != signature.size() ||
      png_sig_cmp(signature.data(), 0, signature.size()) != 0) {
    throw FormatError("'" + path.string() + "' is not a PNG file");
  }
  std::rewind(file.get());

  DecodeHeader header;
  std::vector<png_byte> bytes;
  std::vector<png_bytep> rows;
  PngMessage message;
  if (!decode_png(file.get(), &header, &bytes, &rows, &message)) {
    throw FormatError("cannot decode '" + path.string() + "': " + message.text);
  }

  PngRaster raster;
  raster.width = static_cast<int>(header.width);
  raster.height = static_cast<int>(header.height);
  raster.channels = header.channels;
  raster.bit_depth = header.bit_depth;
  const std::size_t count =
      static_cast<std::size_t>(header.width) * header.height * static_cast<std::size_t>(header.channels);
  raster.samples.resize(count);
  if (header.bit_depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      raster.samples[i] = static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
    }
  } else if (header.bit_depth == 8) {
    std::copy(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(count),
              raster.samples.begin());
  } else {
    throw FormatError("'" + path.string() + "': unsupported bit depth " +
                      std::to_string(header.bit_depth));
  }
  return raster;
}

void write_png(const std::filesystem::path& path, const PngRaster& raster) {
  if (raster.width <= 0 || raster.height <= 0 || raster.channels < 1 || raster.channels > 4 ||
      (raster.bit_depth != 8 && raster.bit_depth != 16) ||
      raster.samples.size() != static_cast<std::size_t>(raster.width) * raster.height *
                                   static_cast<std::size_t>(raster.channels)) {
    throw InvalidArgument("write_png: inconsistent raster description");
  }
  const std::size_t bytes_per_sample = raster.bit_depth == 16 ? 2 : 1;
  const std::size_t stride =
      static_cast<std::size_t>(raster.width) * raster.channels * bytes_per_sample;
  std::vector<png_byte> bytes(stride * raster.height);
  for (std::size_t i = 0; i < raster.samples.size(); ++i) {
    if (bytes_per_sample == 2) {
      bytes[2 * i] = static_cast<png_byte>(raster.samples[i] >> 8);
      bytes[2 * i + 1] = static_cast<png_byte>(raster.samples[i] & 0xFF);
    } else {
      bytes[i] = static_cast<png_byte>(std::min<std::uint16_t>(raster.samples[i], 255));
    }
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(raster.height));
  for (int y = 0; y < raster.height; ++y) {
    rows[static_cast<std::size_t>(y)] = bytes.data() + stride * static_cast<std::size_t>(y);
  }

  FilePtr file = open_file(path, "wb");
  PngMessage message;
  if (!encode_png(file.get(), &raster, &rows, &message)) {
    throw IoError("cannot encode '" + path.string() + "': " + message.text);
  }
  if (std::fflush(file.get()) != 0) {
    throw IoError("cannot write '" + path.string() + "'");
  }
}

RgbImage load_rgb(const std::filesystem::path& path) {
  const PngRaster raster = read_png(path);
  if (raster.channels != 3) {
    throw FormatError("'" + path.string() + "': expected 3 channels, found " +
                      std::to_string(raster.channels));
  }
  const double max_value = raster.bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<Rgb> pixels(static_cast<std::size_t>(raster.width) * raster.height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = Rgb{raster.samples[3 * i] / max_value, raster.samples[3 * i + 1] / max_value,
                    raster.samples[3 * i + 2] / max_value};
  }
  return RgbImage(raster.width, raster.height, std::move(pixels));
}

void save_rgb(const RgbImage& image, const std::filesystem::path& path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw InvalidArgument("save_rgb: bit depth must be 8 or 16");
  }
  const double max_value = bit_depth == 16 ? 65535.0 : 255.0;
  PngRaster raster{image.width(), image.height(), 3, bit_depth, {}};
  raster.samples.reserve(image.size() * 3);
  for (const Rgb& p : image.pixels()) {
    raster.samples.push_back(quantize(p.r, max_value));
    raster.samples.push_back(quantize(p.g, max_value));
    raster.samples.push_back(quantize(p.b, max_value));
  }
  write_png(path, raster);
}

DepthMap load_depth(const std::filesystem::path& path, double depth_scale) {
  const PngRaster raster = read_png(path);
  if (raster.channels != 1 || raster.bit_depth != 16) {
    throw FormatError("'" + path.string() + "': expected 16-bit single-channel depth, found " +
                      std::to_string(raster.channels) + " channel(s) at " +
                      std::to_string(raster.bit_depth) + " bits");
  }
  std::vector<double> depth(raster.samples.size());
  std::vector<std::uint8_t> valid(raster.samples.size());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    depth[i] = raster.samples[i] / 65535.0;
    valid[i] = raster.samples[i] != 0 ? 1 : 0;
  }
  return DepthMap(raster.width, raster.height, std::move(depth), std::move(valid), depth_scale);
}

void save_depth(const DepthMap& map, const std::filesystem::path& path) {
  PngRaster raster{map.width(), map.height(), 1, 16, {}};
  raster.samples.resize(map.size());
  const auto depth = map.depth();
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map.is_valid(i)) {
      raster.samples[i] = std::max<std::uint16_t>(quantize(depth[i], 65535.0), 1);
    }
  }
  write_png(path, raster);
}

Plane load_mask(const std::filesystem::path& path) {
  const PngRaster raster = read_png(path);
  if (raster.channels != 1) {
    throw FormatError("'" + path.string() + "': mask must be single-channel, found " +
                      std::to_string(raster.channels) + " channels");
  }
  std::vector<double> values(raster.samples.size());
  std::transform(raster.samples.begin(), raster.samples.end(), values.begin(),
                 [](std::uint16_t s) { return s != 0 ? 1.0 : 0.0; });
  return Plane(raster.width, raster.height, std::move(values));
}

void save_depth_visualization(const DepthMap& map, const std::filesystem::path& path) {
  PngRaster raster{map.width(), map.height(), 3, 8, {}};
  raster.samples.resize(map.size() * 3);
  const auto depth = map.depth();
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.is_valid(i)) continue;
    // Near (small depth) maps to the bright end of the ramp.
    const auto color = colormap_lookup(1.0 - depth[i]);
    raster.samples[3 * i] = color[0];
    raster.samples[3 * i + 1] = color[1];
    raster.samples[3 * i + 2] = color[2];
  }
  write_png(path, raster);
}

void save_rmi(const RmiImage& image, const std::filesystem::path& path) {
  PngRaster raster{image.width(), image.height(), 3, 8, {}};
  raster.samples.reserve(image.size() * 3);
  for (const Rmi& p : image.pixels()) {
    raster.samples.push_back(quantize(p.r, 255.0));
    raster.samples.push_back(quantize(p.m, 255.0));
    raster.samples.push_back(quantize(p.i, 255.0));
  }
  write_png(path, raster);
}

}  // namespace uwdepth
