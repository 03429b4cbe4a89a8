#pragma once

#include <optional>

#include "rsgeo/image.hpp"
#include "rsgeo/pose.hpp"

namespace rsgeo {

/// Pinhole intrinsics in pixels.
struct Intrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;
};

/// Rolling-shutter readout timing. Image rows may be a downscaled view
/// of the physical sensor rows; row r of the image reads out at
/// frame_start + sensor_row(r) * row_period.
struct ReadoutClock {
  double row_period = 0.0;  // seconds between consecutive sensor rows
  int sensor_rows = 0;
  int image_rows = 0;
  double frame_start = 0.0;  // seconds

  double row_scale() const {
    return static_cast<double>(sensor_rows) / image_rows;
  }
  double frame_readout_time() const { return sensor_rows * row_period; }
};

/// Per-pixel map from rectified pixel position to the (fractional)
/// original sensor scan-line, absorbing lens-distortion row shifts.
struct ScanlineLUT {
  ImageF table;  // 1 channel

  int width() const { return table.width; }
  int height() const { return table.height; }
  double at(int x, int y) const { return table.at(x, y); }
};

Vec2 project(const Intrinsics& k, const Vec3& x);          // throws BehindCamera
Vec3 backproject(const Intrinsics& k, const Vec2& u, double depth);

// Fractional sensor row of pixel u: lut(u) if supplied, else
// v * sensor_rows / image_rows. Throws OutOfBounds.
double sensor_row(const ReadoutClock& clock, const ScanlineLUT* lut,
                  const Vec2& u);

// Capture time of pixel u within the frame.
double row_time(const ReadoutClock& clock, const ScanlineLUT* lut,
                const Vec2& u);

// Degenerate no-distortion LUT: lut(u, v) = v * sensor_rows / rows.
ScanlineLUT build_identity_lut(int rows, int cols, int sensor_rows);

}  // namespace rsgeo
