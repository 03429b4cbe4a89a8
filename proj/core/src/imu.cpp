#include "rsgeo/imu.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rsgeo/errors.hpp"

namespace rsgeo {

namespace {

Vec3 interp_gyro(const ImuSeries& s, double t) {
  // Callers have verified coverage; binary search the bracketing pair.
  const auto& v = s.samples;
  auto it = std::lower_bound(
      v.begin(), v.end(), t,
      [](const ImuSample& a, double ts) { return a.timestamp < ts; });
  if (it == v.begin()) return it->gyro;
  if (it == v.end()) return v.back().gyro;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double f = (t - a.timestamp) / (b.timestamp - a.timestamp);
  return (1.0 - f) * a.gyro + f * b.gyro;
}

void check_coverage(const ImuSeries& s, double t0, double t1) {
  if (s.samples.empty() || t0 < s.start_time() || t1 > s.end_time())
    throw CoverageGap("row times [" + std::to_string(t0) + ", " +
                      std::to_string(t1) + "] outside IMU span");
}

}  // namespace

ImuSeries rotate_to_camera(const ImuSeries& series, const ImuExtrinsics& ext) {
  if (series.frame == ImuFrame::Camera)
    throw AlreadyInCameraFrame("series already in camera frame");
  ImuSeries out = series;
  out.frame = ImuFrame::Camera;
  for (auto& s : out.samples) {
    s.gyro = ext.cam_from_imu * s.gyro;
    s.accel = ext.cam_from_imu * s.accel;
  }
  return out;
}

std::vector<RowImu> per_row_interpolate(const ImuSeries& series,
                                        const ReadoutClock& clock, int rows) {
  const double step = clock.row_scale() * clock.row_period;
  check_coverage(series, clock.frame_start,
                 clock.frame_start + (rows - 1) * step);

  std::vector<RowImu> out;
  out.reserve(rows);
  const auto& v = series.samples;
  for (int r = 0; r < rows; ++r) {
    const double t = clock.frame_start + r * step;
    auto it = std::lower_bound(
        v.begin(), v.end(), t,
        [](const ImuSample& a, double ts) { return a.timestamp < ts; });
    if (it == v.begin()) {
      out.push_back({it->gyro, it->accel});
      continue;
    }
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double f = (t - a.timestamp) / (b.timestamp - a.timestamp);
    out.push_back({(1.0 - f) * a.gyro + f * b.gyro,
                   (1.0 - f) * a.accel + f * b.accel});
  }
  return out;
}

RowPoseTable gyro_integrate_rowposes(const ImuSeries& series,
                                     const ReadoutClock& clock, int rows,
                                     int substeps, const Vec3& gyro_bias) {
  const double step = clock.row_scale() * clock.row_period;
  if (rows > 0)
    check_coverage(series, clock.frame_start,
                   clock.frame_start + (rows - 1) * step);

  RowPoseTable table;
  table.rows.reserve(rows);
  Quat r = Quat::Identity();
  for (int row = 0; row < rows; ++row) {
    Pose p;
    p.rotation = r;
    table.rows.push_back(p);
    if (row + 1 >= rows) break;
    const double t0 = clock.frame_start + row * step;
    const double dt = step / substeps;
    for (int k = 0; k < substeps; ++k) {
      const double mid = t0 + (k + 0.5) * dt;
      const Vec3 w = interp_gyro(series, mid) - gyro_bias;
      r = (r * rotation_exp(w * dt)).normalized();
    }
  }
  return table;
}

ImuSeries load_imu_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open IMU file: " + path);
  ImuSeries series;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find("timestamp") != std::string::npos) continue;
    }
    std::istringstream ss(line);
    ImuSample s;
    char comma;
    ss >> s.timestamp >> comma >> s.gyro.x() >> comma >> s.gyro.y() >> comma >>
        s.gyro.z() >> comma >> s.accel.x() >> comma >> s.accel.y() >> comma >>
        s.accel.z();
    if (ss.fail()) throw IoError("malformed IMU line: " + line);
    if (!series.samples.empty() &&
        s.timestamp <= series.samples.back().timestamp)
      throw IoError("non-increasing IMU timestamps in " + path);
    series.samples.push_back(s);
  }
  if (series.samples.empty()) throw IoError("no IMU samples in " + path);
  return series;
}

void save_imu_csv(const ImuSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write IMU file: " + path);
  out.precision(17);
  out << "timestamp,wx,wy,wz,ax,ay,az\n";
  for (const auto& s : series.samples)
    out << s.timestamp << ',' << s.gyro.x() << ',' << s.gyro.y() << ','
        << s.gyro.z() << ',' << s.accel.x() << ',' << s.accel.y() << ','
        << s.accel.z() << '\n';
}

}  // namespace rsgeo
