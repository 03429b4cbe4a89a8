#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <vector>

namespace rsgeo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

/// Rigid transform, stored as unit quaternion + translation (meters).
/// Applies as X' = R * X + t.
struct Pose {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }

  // Unit-norm quaternion with w >= 0 (canonical double-cover representative).
  Pose canonical() const;
};

Pose compose(const Pose& a, const Pose& b);   // applies b, then a
Pose invert(const Pose& p);
Vec3 transform_point(const Pose& p, const Vec3& x);

// a_from_b given world_from_a and world_from_b.
Pose relative_pose(const Pose& world_from_a, const Pose& world_from_b);

// Slerp on rotation, lerp on translation, s in [0,1].
Pose interpolate_pose(const Pose& a, const Pose& b, double s);

// Axis-angle exponential; rotvec in radians.
Quat rotation_exp(const Vec3& rotvec);
Vec3 rotation_log(const Quat& q);

// Geodesic angle between two rotations, radians.
double rotation_distance(const Quat& a, const Quat& b);

/// Per-row transform from the frame of row r to the frame of row 0
/// of the same rolling-shutter frame. rows[0] is identity.
struct RowPoseTable {
  std::vector<Pose> rows;

  int size() const { return static_cast<int>(rows.size()); }

  // Pose at a fractional image row: slerp/lerp between the adjacent
  // integer entries, clamped to the table span.
  Pose at_row(double r) const;
};

}  // namespace rsgeo
