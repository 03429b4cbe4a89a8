#pragma once

#include <string>
#include <vector>

#include "rsgeo/camera.hpp"
#include "rsgeo/pose.hpp"

namespace rsgeo {

struct ImuSample {
  double timestamp = 0.0;  // seconds
  Vec3 gyro = Vec3::Zero();   // rad/s
  Vec3 accel = Vec3::Zero();  // m/s^2
};

enum class ImuFrame { Imu, Camera };

/// Ordered IMU samples with strictly increasing timestamps.
struct ImuSeries {
  std::vector<ImuSample> samples;
  ImuFrame frame = ImuFrame::Imu;

  int size() const { return static_cast<int>(samples.size()); }
  double start_time() const { return samples.front().timestamp; }
  double end_time() const { return samples.back().timestamp; }
};

struct ImuExtrinsics {
  Quat cam_from_imu = Quat::Identity();
};

struct RowImu {
  Vec3 gyro;
  Vec3 accel;
};

// Rotates gyro and accel into the camera frame; timestamps unchanged.
// Throws AlreadyInCameraFrame if the series is already tagged camera.
ImuSeries rotate_to_camera(const ImuSeries& series, const ImuExtrinsics& ext);

// Linear interpolation of gyro and accel at each image row's sensor
// time. Throws CoverageGap when a row time falls outside the series.
std::vector<RowImu> per_row_interpolate(const ImuSeries& series,
                                        const ReadoutClock& clock, int rows);

// Rotation-only row poses from gyro integration: R[0] = I,
// R[r+1] = R[r] * exp(w_mid * dt) with midpoint-sampled angular
// velocity; translations zero. substeps subdivides each row interval.
// The optional constant bias is subtracted before integration.
RowPoseTable gyro_integrate_rowposes(const ImuSeries& series,
                                     const ReadoutClock& clock, int rows,
                                     int substeps = 1,
                                     const Vec3& gyro_bias = Vec3::Zero());

// CSV with header "timestamp,wx,wy,wz,ax,ay,az"; seconds, rad/s, m/s^2.
ImuSeries load_imu_csv(const std::string& path);
void save_imu_csv(const ImuSeries& series, const std::string& path);

}  // namespace rsgeo
