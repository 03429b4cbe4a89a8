#include <doctest.h>

#include <random>

#include "rsgeo/errors.hpp"
#include "rsgeo/geometry.hpp"
#include "test_util.hpp"

using namespace rsgeo;

namespace {

Intrinsics test_k(double f = 100.0, double cx = 160.0, double cy = 128.0) {
  Intrinsics k;
  k.fx = k.fy = f;
  k.cx = cx;
  k.cy = cy;
  k.width = 320;
  k.height = 256;
  return k;
}

// Independent oracle: homogeneous linear least-squares (DLT) over the
// two projection equations, solved by SVD.
Vec3 triangulate_dlt(const Vec2& u_gs0, const Vec2& u_rs,
                     const Pose& gs0_from_rsrow, const Intrinsics& k_rs,
                     const Intrinsics& k_gs0) {
  auto k_matrix = [](const Intrinsics& k) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = k.fx;
    m(1, 1) = k.fy;
    m(0, 2) = k.cx;
    m(1, 2) = k.cy;
    return m;
  };
  Eigen::Matrix<double, 3, 4> p1, p2;
  p1.setZero();
  p1.block<3, 3>(0, 0) = Eigen::Matrix3d::Identity();
  p1 = k_matrix(k_rs) * p1;
  p2.block<3, 3>(0, 0) = gs0_from_rsrow.rotation.toRotationMatrix();
  p2.col(3) = gs0_from_rsrow.translation;
  p2 = k_matrix(k_gs0) * p2;

  const Vec3 x1(u_rs.x(), u_rs.y(), 1.0);
  const Vec3 x2(u_gs0.x(), u_gs0.y(), 1.0);
  Eigen::Matrix4d design;
  design.row(0) = x1.x() * p1.row(2) - p1.row(0);
  design.row(1) = x1.y() * p1.row(2) - p1.row(1);
  design.row(2) = x2.x() * p2.row(2) - p2.row(0);
  design.row(3) = x2.y() * p2.row(2) - p2.row(1);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(design, Eigen::ComputeFullV);
  const Eigen::Vector4d h = svd.matrixV().col(3);
  return h.head<3>() / h(3);
}

}  // namespace

TEST_CASE("rectified stereo disparity identity") {
  const Intrinsics k = test_k();
  // GS0 camera 0.1 m to the left of the RS camera: RS-frame points gain
  // +0.1 m of x when expressed in the GS0 frame.
  Pose gs0_from_rsrow;
  gs0_from_rsrow.translation = {0.1, 0, 0};
  const TriangulationResult r =
      triangulate({165, 128}, {160, 128}, gs0_from_rsrow, k, k);
  // d = f * b / disparity = 100 * 0.1 / 5
  CHECK(r.depth == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.residual < 1e-12);
}

TEST_CASE("zero-noise synthesis recovery and DLT agreement") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> upt(-1.5, 1.5);
  std::uniform_real_distribution<double> uz(1.0, 8.0);
  const Intrinsics k_rs = test_k();
  const Intrinsics k_gs0 = test_k(120.0, 158.0, 130.0);

  int done = 0;
  while (done < 1000) {
    const Pose gs0_from_rsrow = test::random_pose(rng, 0.5);
    const Vec3 x(upt(rng), upt(rng), uz(rng));
    const Vec3 x_gs0 = transform_point(gs0_from_rsrow, x);
    if (x_gs0.z() < 0.1) continue;
    const Vec2 u_rs = project(k_rs, x);
    const Vec2 u_gs0 = project(k_gs0, x_gs0);

    TriangulationResult r;
    try {
      r = triangulate(u_gs0, u_rs, gs0_from_rsrow, k_rs, k_gs0);
    } catch (const DegenerateRays&) {
      continue;
    }
    CHECK((r.point - x).norm() < 1e-9);
    const Vec3 dlt = triangulate_dlt(u_gs0, u_rs, gs0_from_rsrow, k_rs, k_gs0);
    CHECK((r.point - dlt).norm() < 1e-6);
    ++done;
  }
}

TEST_CASE("degenerate rays") {
  const Intrinsics k = test_k();
  // Zero baseline: both rays emanate from the same center.
  CHECK_THROWS_AS(triangulate({160, 128}, {160, 128}, Pose::identity(), k, k),
                  DegenerateRays);
  // Parallel rays from displaced centers.
  Pose sideways;
  sideways.translation = {0.1, 0, 0};
  CHECK_THROWS_AS(triangulate({200, 90}, {200, 90}, sideways, k, k),
                  DegenerateRays);
}

TEST_CASE("behind-camera solution rejected") {
  const Intrinsics k = test_k();
  Pose gs0_from_rsrow;
  gs0_from_rsrow.translation = {0.1, 0, 0};
  // Disparity with the wrong sign puts the intersection behind the camera.
  CHECK_THROWS_AS(triangulate({155, 128}, {160, 128}, gs0_from_rsrow, k, k),
                  NegativeDepth);
}

TEST_CASE("residual reports ray-to-ray distance under noise") {
  const Intrinsics k = test_k();
  Pose gs0_from_rsrow;
  gs0_from_rsrow.translation = {0.2, 0, 0};
  const Vec3 x(0.3, -0.2, 3.0);
  const Vec2 u_rs = project(k, x);
  Vec2 u_gs0 = project(k, transform_point(gs0_from_rsrow, x));
  u_gs0.y() += 2.0;  // vertical epipolar violation
  const TriangulationResult r = triangulate(u_gs0, u_rs, gs0_from_rsrow, k, k);
  CHECK(r.residual > 1e-3);
}
