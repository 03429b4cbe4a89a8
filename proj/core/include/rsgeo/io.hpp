#pragma once

#include <map>
#include <string>

#include "rsgeo/camera.hpp"
#include "rsgeo/image.hpp"

namespace rsgeo {
namespace io {

// ---- PFM (float32, little-endian written, bottom-to-top rows) ----
ImageF load_pfm(const std::string& path);  // 1 or 3 channels
void save_pfm(const ImageF& img, const std::string& path);

// DepthMap as 1-channel PFM; invalid pixels stored as NaN.
DepthMap load_depth_pfm(const std::string& path);
void save_depth_pfm(const DepthMap& depth, const std::string& path);

// CoordinateMap as 3-channel PFM: (u, v, validity). The depth channel
// is not persisted.
CoordinateMap load_map_pfm(const std::string& path);
void save_map_pfm(const CoordinateMap& map, const std::string& path);

ScanlineLUT load_lut_pfm(const std::string& path);
void save_lut_pfm(const ScanlineLUT& lut, const std::string& path);

// ---- Middlebury .flo ----
FlowField load_flo(const std::string& path);
void save_flo(const FlowField& flow, const std::string& path);

// ---- 8-bit grayscale images, PGM or PNG by extension ----
ImageU8 load_image_gray(const std::string& path);
void save_image_gray(const ImageU8& img, const std::string& path);

// ---- Plain key-value config: "key = value" lines, '#' comments ----
using Config = std::map<std::string, std::string>;
Config load_config(const std::string& path);

double config_num(const Config& c, const std::string& key);
double config_num(const Config& c, const std::string& key, double fallback);
std::string config_str(const Config& c, const std::string& key);
std::string config_str(const Config& c, const std::string& key,
                       const std::string& fallback);
bool config_has(const Config& c, const std::string& key);

// Intrinsics + clock from config keys fx, fy, cx, cy, width, height,
// row_period_us, sensor_rows (optionally prefixed, e.g. "gs0_").
Intrinsics intrinsics_from_config(const Config& c,
                                  const std::string& prefix = "");
ReadoutClock clock_from_config(const Config& c);

}  // namespace io
}  // namespace rsgeo
