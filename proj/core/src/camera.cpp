#include "rsgeo/camera.hpp"

#include <cmath>
#include <string>

#include "rsgeo/errors.hpp"

namespace rsgeo {

Vec2 project(const Intrinsics& k, const Vec3& x) {
  if (x.z() <= 1e-9)
    throw BehindCamera("projection of point with z = " +
                       std::to_string(x.z()));
  return {k.fx * x.x() / x.z() + k.cx, k.fy * x.y() / x.z() + k.cy};
}

Vec3 backproject(const Intrinsics& k, const Vec2& u, double depth) {
  if (depth <= 0.0)
    throw NonPositiveDepth("backprojection at depth " + std::to_string(depth));
  return {depth * (u.x() - k.cx) / k.fx, depth * (u.y() - k.cy) / k.fy, depth};
}

double sensor_row(const ReadoutClock& clock, const ScanlineLUT* lut,
                  const Vec2& u) {
  if (lut) {
    const int x = static_cast<int>(std::lround(u.x()));
    const int y = static_cast<int>(std::lround(u.y()));
    if (x < 0 || y < 0 || x >= lut->width() || y >= lut->height())
      throw OutOfBounds("pixel outside LUT");
    return lut->at(x, y);
  }
  if (u.y() < 0.0 || u.y() > clock.image_rows - 1)
    throw OutOfBounds("row " + std::to_string(u.y()) + " outside image");
  return u.y() * clock.row_scale();
}

double row_time(const ReadoutClock& clock, const ScanlineLUT* lut,
                const Vec2& u) {
  return clock.frame_start + sensor_row(clock, lut, u) * clock.row_period;
}

ScanlineLUT build_identity_lut(int rows, int cols, int sensor_rows) {
  ScanlineLUT lut;
  lut.table = ImageF(cols, rows, 1);
  const double scale = static_cast<double>(sensor_rows) / rows;
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x)
      lut.table.at(x, y) = static_cast<float>(y * scale);
  return lut;
}

}  // namespace rsgeo
