#pragma once

#include <span>
#include <string>
#include <vector>

#include "rsgeo/pose.hpp"

namespace rsgeo {

/// Timestamped pose samples with strictly increasing timestamps (seconds).
struct Trajectory {
  struct Sample {
    double timestamp = 0.0;
    Pose pose;
  };
  std::vector<Sample> samples;

  int size() const { return static_cast<int>(samples.size()); }
  double start_time() const { return samples.front().timestamp; }
  double end_time() const { return samples.back().timestamp; }
};

/// Natural cubic spline through (t_i, y_i), non-uniform knots.
/// Second derivative is zero at both ends.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> t, std::span<const double> y);

  double eval(double x) const;        // throws QueryOutOfRange outside [t0, tn]
  double derivative(double x) const;

 private:
  std::vector<double> t_, y_, m_;  // m_: second derivatives at knots
};

// Cubic-spline interpolation of the trajectory at the query times.
// Translation components are splined independently; rotation is splined
// over hemisphere-consistent quaternion components and renormalized.
// Requires >= 4 samples and every query inside the sample span.
std::vector<Pose> interpolate_trajectory(const Trajectory& traj,
                                         std::span<const double> query_times);

// TUM trajectory format: "timestamp tx ty tz qx qy qz qw" per line,
// '#' comments ignored.
Trajectory load_trajectory_tum(const std::string& path);
void save_trajectory_tum(const Trajectory& traj, const std::string& path);

}  // namespace rsgeo
