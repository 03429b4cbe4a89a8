#include "rsgeo/image.hpp"

#include <algorithm>
#include <cmath>

namespace rsgeo {

double sample_bilinear(const ImageF& img, double x, double y, int c) {
  const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, img.width - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, img.height - 1);
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double fx = std::clamp(x - x0, 0.0, 1.0);
  const double fy = std::clamp(y - y0, 0.0, 1.0);
  const double v00 = img.at(x0, y0, c), v10 = img.at(x1, y0, c);
  const double v01 = img.at(x0, y1, c), v11 = img.at(x1, y1, c);
  return (1 - fy) * ((1 - fx) * v00 + fx * v10) +
         fy * ((1 - fx) * v01 + fx * v11);
}

ImageF to_float(const ImageU8& img) {
  ImageF out(img.width, img.height, img.channels);
  for (size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = static_cast<float>(img.data[i]);
  return out;
}

ImageU8 to_u8(const ImageF& img) {
  ImageU8 out(img.width, img.height, img.channels);
  for (size_t i = 0; i < img.data.size(); ++i) {
    const float v = std::clamp(img.data[i], 0.0f, 255.0f);
    out.data[i] = static_cast<std::uint8_t>(std::lround(v));
  }
  return out;
}

}  // namespace rsgeo
