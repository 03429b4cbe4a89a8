#include "rsgeo/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "rsgeo/errors.hpp"

namespace rsgeo {
namespace io {

namespace {

bool host_little_endian() {
  return std::endian::native == std::endian::little;
}

void swap_floats(float* data, size_t n) {
  auto* bytes = reinterpret_cast<unsigned char*>(data);
  for (size_t i = 0; i < n; ++i)
    std::swap(bytes[4 * i], bytes[4 * i + 3]), std::swap(bytes[4 * i + 1], bytes[4 * i + 2]);
}

std::string lower_ext(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

// ---------------------------------------------------------------- PFM

ImageF load_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open PFM file: " + path);
  std::string magic;
  int w, h;
  double scale;
  in >> magic >> w >> h >> scale;
  if (!in || (magic != "Pf" && magic != "PF") || w <= 0 || h <= 0)
    throw IoError("invalid PFM header in " + path);
  in.get();  // single whitespace after the header

  const int channels = magic == "PF" ? 3 : 1;
  ImageF img(w, h, channels);
  // PFM rows are stored bottom-to-top.
  std::vector<float> row(static_cast<size_t>(w) * channels);
  for (int y = h - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(float));
    if (!in) throw IoError("truncated PFM data in " + path);
    if ((scale < 0.0) != host_little_endian())
      swap_floats(row.data(), row.size());
    std::memcpy(&img.at(0, y, 0), row.data(), row.size() * sizeof(float));
  }
  return img;
}

void save_pfm(const ImageF& img, const std::string& path) {
  if (img.channels != 1 && img.channels != 3)
    throw IoError("PFM supports 1 or 3 channels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write PFM file: " + path);
  out << (img.channels == 3 ? "PF" : "Pf") << '\n'
      << img.width << ' ' << img.height << '\n'
      << (host_little_endian() ? "-1.0" : "1.0") << '\n';
  const size_t rowlen = static_cast<size_t>(img.width) * img.channels;
  for (int y = img.height - 1; y >= 0; --y)
    out.write(reinterpret_cast<const char*>(&img.at(0, y, 0)),
              rowlen * sizeof(float));
  if (!out) throw IoError("short write to " + path);
}

DepthMap load_depth_pfm(const std::string& path) {
  const ImageF img = load_pfm(path);
  if (img.channels != 1) throw IoError("depth PFM must be 1-channel: " + path);
  DepthMap d(img.width, img.height);
  d.values = img;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const float v = img.at(x, y);
      d.valid.at(x, y) = (std::isfinite(v) && v > 0.0f) ? 1 : 0;
    }
  return d;
}

void save_depth_pfm(const DepthMap& depth, const std::string& path) {
  ImageF img = depth.values;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (!depth.valid.at(x, y))
        img.at(x, y) = std::numeric_limits<float>::quiet_NaN();
  save_pfm(img, path);
}

CoordinateMap load_map_pfm(const std::string& path) {
  const ImageF img = load_pfm(path);
  if (img.channels != 3)
    throw IoError("coordinate-map PFM must be 3-channel: " + path);
  CoordinateMap m(img.width, img.height);
  m.depth.data.clear();  // not persisted
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      m.uv.at(x, y, 0) = img.at(x, y, 0);
      m.uv.at(x, y, 1) = img.at(x, y, 1);
      m.valid.at(x, y) = img.at(x, y, 2) > 0.5f ? 1 : 0;
    }
  return m;
}

void save_map_pfm(const CoordinateMap& map, const std::string& path) {
  ImageF img(map.width(), map.height(), 3);
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x) {
      img.at(x, y, 0) = map.uv.at(x, y, 0);
      img.at(x, y, 1) = map.uv.at(x, y, 1);
      img.at(x, y, 2) = map.valid.at(x, y) ? 1.0f : 0.0f;
    }
  save_pfm(img, path);
}

ScanlineLUT load_lut_pfm(const std::string& path) {
  ScanlineLUT lut;
  lut.table = load_pfm(path);
  if (lut.table.channels != 1)
    throw IoError("scanline LUT PFM must be 1-channel: " + path);
  return lut;
}

void save_lut_pfm(const ScanlineLUT& lut, const std::string& path) {
  save_pfm(lut.table, path);
}

// ---------------------------------------------------------------- .flo

FlowField load_flo(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open flow file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "PIEH", 4) != 0)
    throw IoError("bad .flo magic in " + path);
  std::int32_t w = 0, h = 0;
  in.read(reinterpret_cast<char*>(&w), 4);
  in.read(reinterpret_cast<char*>(&h), 4);
  if (!in || w <= 0 || h <= 0) throw IoError("bad .flo dimensions in " + path);
  FlowField flow(w, h);
  in.read(reinterpret_cast<char*>(flow.uv.data.data()),
          flow.uv.data.size() * sizeof(float));
  if (!in) throw IoError("truncated .flo data in " + path);
  return flow;
}

void save_flo(const FlowField& flow, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write flow file: " + path);
  out.write("PIEH", 4);
  const std::int32_t w = flow.width(), h = flow.height();
  out.write(reinterpret_cast<const char*>(&w), 4);
  out.write(reinterpret_cast<const char*>(&h), 4);
  out.write(reinterpret_cast<const char*>(flow.uv.data.data()),
            flow.uv.data.size() * sizeof(float));
  if (!out) throw IoError("short write to " + path);
}

// ---------------------------------------------------------------- images

namespace {

ImageU8 load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open PGM file: " + path);
  std::string magic;
  int w, h, maxval;
  in >> magic >> w >> h >> maxval;
  if (!in || magic != "P5" || maxval != 255)
    throw IoError("expected 8-bit binary PGM: " + path);
  in.get();
  ImageU8 img(w, h, 1);
  in.read(reinterpret_cast<char*>(img.data.data()), img.data.size());
  if (!in) throw IoError("truncated PGM data in " + path);
  return img;
}

void save_pgm(const ImageU8& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write PGM file: " + path);
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()), img.data.size());
  if (!out) throw IoError("short write to " + path);
}

ImageU8 load_png_gray(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open PNG file: " + path);
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng failed reading " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) & PNG_COLOR_MASK_PALETTE)
    png_set_palette_to_rgb(png);
  if (png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  const int w = png_get_image_width(png, info);
  const int h = png_get_image_height(png, info);
  ImageU8 img(w, h, 1);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = &img.at(0, y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void save_png_gray(const ImageU8& img, const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write PNG file: " + path);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng failed writing " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(img.height);
  ImageU8& mut = const_cast<ImageU8&>(img);
  for (int y = 0; y < img.height; ++y) rows[y] = &mut.at(0, y);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

ImageU8 load_image_gray(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "png") return load_png_gray(path);
  if (ext == "pgm") return load_pgm(path);
  throw IoError("unsupported image extension: " + path);
}

void save_image_gray(const ImageU8& img, const std::string& path) {
  if (img.channels != 1) throw IoError("expected grayscale image");
  const std::string ext = lower_ext(path);
  if (ext == "png") return save_png_gray(img, path);
  if (ext == "pgm") return save_pgm(img, path);
  throw IoError("unsupported image extension: " + path);
}

// ---------------------------------------------------------------- config

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  Config c;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) c[key] = val;
  }
  return c;
}

bool config_has(const Config& c, const std::string& key) {
  return c.count(key) > 0;
}

double config_num(const Config& c, const std::string& key) {
  auto it = c.find(key);
  if (it == c.end()) throw IoError("missing config key: " + key);
  return std::stod(it->second);
}

double config_num(const Config& c, const std::string& key, double fallback) {
  auto it = c.find(key);
  return it == c.end() ? fallback : std::stod(it->second);
}

std::string config_str(const Config& c, const std::string& key) {
  auto it = c.find(key);
  if (it == c.end()) throw IoError("missing config key: " + key);
  return it->second;
}

std::string config_str(const Config& c, const std::string& key,
                       const std::string& fallback) {
  auto it = c.find(key);
  return it == c.end() ? fallback : it->second;
}

Intrinsics intrinsics_from_config(const Config& c, const std::string& prefix) {
  Intrinsics k;
  k.fx = config_num(c, prefix + "fx");
  k.fy = config_num(c, prefix + "fy");
  k.cx = config_num(c, prefix + "cx");
  k.cy = config_num(c, prefix + "cy");
  k.width = static_cast<int>(config_num(c, prefix + "width"));
  k.height = static_cast<int>(config_num(c, prefix + "height"));
  return k;
}

ReadoutClock clock_from_config(const Config& c) {
  ReadoutClock clock;
  clock.row_period = config_num(c, "row_period_us") * 1e-6;
  clock.sensor_rows = static_cast<int>(config_num(c, "sensor_rows"));
  clock.image_rows = static_cast<int>(config_num(c, "height"));
  clock.frame_start = config_num(c, "frame_start", 0.0);
  return clock;
}

}  // namespace io
}  // namespace rsgeo
