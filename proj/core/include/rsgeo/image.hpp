#pragma once

#include <cstdint>
#include <vector>

#include "rsgeo/pose.hpp"

namespace rsgeo {

/// Dense row-major H x W x C buffer. (x, y) = (column, row),
/// origin at the top-left pixel center.
template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, int c = 1, T fill = T{})
      : width(w), height(h), channels(c),
        data(static_cast<size_t>(w) * h * c, fill) {}

  T& at(int x, int y, int c = 0) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  const T& at(int x, int y, int c = 0) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  bool in_bounds(double x, double y) const {
    return x >= 0.0 && y >= 0.0 && x <= width - 1 && y <= height - 1;
  }
  bool same_size(int w, int h) const { return width == w && height == h; }
};

using ImageF = Image<float>;
using ImageU8 = Image<std::uint8_t>;
using Mask = Image<std::uint8_t>;  // 1 = valid/filled, 0 = not

// Bilinear sample of channel c; caller guarantees (x, y) in bounds.
double sample_bilinear(const ImageF& img, double x, double y, int c = 0);

ImageF to_float(const ImageU8& img);
ImageU8 to_u8(const ImageF& img);  // clamps to [0, 255], rounds

/// Per-pixel depth in meters with a validity mask; valid entries are
/// positive and finite.
struct DepthMap {
  ImageF values;  // 1 channel
  Mask valid;

  DepthMap() = default;
  DepthMap(int w, int h) : values(w, h, 1), valid(w, h, 1, 0) {}
  int width() const { return values.width; }
  int height() const { return values.height; }
};

/// Dense 2-channel (dx, dy) optical flow field in pixels.
struct FlowField {
  ImageF uv;  // 2 channels

  FlowField() = default;
  FlowField(int w, int h) : uv(w, h, 2) {}
  int width() const { return uv.width; }
  int height() const { return uv.height; }
  Vec2 at(int x, int y) const { return {uv.at(x, y, 0), uv.at(x, y, 1)}; }
  void set(int x, int y, const Vec2& f) {
    uv.at(x, y, 0) = static_cast<float>(f.x());
    uv.at(x, y, 1) = static_cast<float>(f.y());
  }
};

/// Per-pixel target coordinates in the GS1 (row-0) frame. The depth
/// channel carries the projected depth when the producer knows it
/// (correction/synthesis); maps loaded from disk may leave it empty.
struct CoordinateMap {
  ImageF uv;    // 2 channels: target (u, v)
  ImageF depth; // 1 channel, optional (empty if unknown)
  Mask valid;

  CoordinateMap() = default;
  CoordinateMap(int w, int h)
      : uv(w, h, 2), depth(w, h, 1), valid(w, h, 1, 0) {}
  int width() const { return uv.width; }
  int height() const { return uv.height; }
  bool has_depth() const { return !depth.data.empty(); }
  Vec2 target(int x, int y) const { return {uv.at(x, y, 0), uv.at(x, y, 1)}; }
  void set_target(int x, int y, const Vec2& t) {
    uv.at(x, y, 0) = static_cast<float>(t.x());
    uv.at(x, y, 1) = static_cast<float>(t.y());
  }
};

}  // namespace rsgeo
