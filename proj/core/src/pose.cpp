#include "rsgeo/pose.hpp"

#include <cmath>

namespace rsgeo {

Pose Pose::canonical() const {
  Quat q = rotation.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return {q, translation};
}

Pose compose(const Pose& a, const Pose& b) {
  return {(a.rotation * b.rotation).normalized(),
          a.rotation * b.translation + a.translation};
}

Pose invert(const Pose& p) {
  Quat qi = p.rotation.conjugate();
  return {qi, -(qi * p.translation)};
}

Vec3 transform_point(const Pose& p, const Vec3& x) {
  return p.rotation * x + p.translation;
}

Pose relative_pose(const Pose& world_from_a, const Pose& world_from_b) {
  return compose(invert(world_from_a), world_from_b);
}

Pose interpolate_pose(const Pose& a, const Pose& b, double s) {
  return {a.rotation.slerp(s, b.rotation),
          (1.0 - s) * a.translation + s * b.translation};
}

Quat rotation_exp(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) {
    // First-order expansion keeps small-angle integration exact enough.
    Quat q(1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(), 0.5 * rotvec.z());
    return q.normalized();
  }
  return Quat(Eigen::AngleAxisd(angle, rotvec / angle));
}

Vec3 rotation_log(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const double vn = q.vec().norm();
  if (vn < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(vn, q.w());
  return (angle / vn) * q.vec();
}

double rotation_distance(const Quat& a, const Quat& b) {
  // atan2 form stays accurate near identity, where acos(dot) loses
  // half the significant digits.
  const Quat r = a.normalized().conjugate() * b.normalized();
  return 2.0 * std::atan2(r.vec().norm(), std::abs(r.w()));
}

Pose RowPoseTable::at_row(double r) const {
  const int n = size();
  if (n == 0) return Pose::identity();
  if (r <= 0.0) return rows.front();
  if (r >= n - 1) return rows.back();
  const int lo = static_cast<int>(std::floor(r));
  const double s = r - lo;
  if (s == 0.0) return rows[lo];
  return interpolate_pose(rows[lo], rows[lo + 1], s);
}

}  // namespace rsgeo
