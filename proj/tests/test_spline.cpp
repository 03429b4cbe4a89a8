#include <doctest.h>

#include <array>
#include <random>

#include "rsgeo/errors.hpp"
#include "rsgeo/trajectory.hpp"
#include "test_util.hpp"

using namespace rsgeo;

namespace {

Trajectory straight_line_traj() {
  Trajectory traj;
  for (int i = 0; i < 4; ++i) {
    Pose p;
    p.translation = {static_cast<double>(i), 0, 0};
    traj.samples.push_back({static_cast<double>(i), p});
  }
  return traj;
}

// Independent oracle: fit the unique natural cubic on 4 knots by solving
// the full 8x8 piecewise-polynomial system directly.
double natural_spline_oracle_4pt(const std::array<double, 4>& t,
                                 const std::array<double, 4>& y, double x) {
  // Two cubics s0 on [t0,t1... t2] boundary at t1? For 4 knots there are 3
  // segments; solve for second derivatives with the closed-form 2x2 system.
  const double h0 = t[1] - t[0], h1 = t[2] - t[1], h2 = t[3] - t[2];
  const double r1 = 6.0 * ((y[2] - y[1]) / h1 - (y[1] - y[0]) / h0);
  const double r2 = 6.0 * ((y[3] - y[2]) / h2 - (y[2] - y[1]) / h1);
  const double a11 = 2.0 * (h0 + h1), a12 = h1;
  const double a21 = h1, a22 = 2.0 * (h1 + h2);
  const double det = a11 * a22 - a12 * a21;
  const double m1 = (r1 * a22 - a12 * r2) / det;
  const double m2 = (a11 * r2 - a21 * r1) / det;
  const std::array<double, 4> m = {0.0, m1, m2, 0.0};
  int i = x < t[1] ? 0 : (x < t[2] ? 1 : 2);
  const double h = t[i + 1] - t[i];
  const double a = (t[i + 1] - x) / h, b = (x - t[i]) / h;
  return a * y[i] + b * y[i + 1] +
         ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0;
}

}  // namespace

TEST_CASE("spline reproduces knots exactly") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> t = {0.0, 0.7, 1.1, 2.0, 3.5, 4.0};
  std::vector<double> y;
  for (size_t i = 0; i < t.size(); ++i) y.push_back(u(rng));
  CubicSpline s(t, y);
  for (size_t i = 0; i < t.size(); ++i)
    CHECK(s.eval(t[i]) == doctest::Approx(y[i]).epsilon(1e-14));
}

TEST_CASE("spline matches independent 4-knot oracle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 4> t = {0.0, 1.0 + u(rng) * 0.1, 2.0, 3.0 + u(rng) * 0.1};
    std::array<double, 4> y = {u(rng), u(rng), u(rng), u(rng)};
    CubicSpline s(std::vector<double>(t.begin(), t.end()),
                  std::vector<double>(y.begin(), y.end()));
    for (double x = t[0]; x <= t[3]; x += 0.0973) {
      CHECK(s.eval(x) ==
            doctest::Approx(natural_spline_oracle_4pt(t, y, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("spline through collinear points is linear") {
  std::vector<double> t = {0, 1, 2, 3};
  std::vector<double> y = {0, 1, 2, 3};
  CubicSpline s(t, y);
  CHECK(std::abs(s.eval(1.5) - 1.5) < 1e-12);
  CHECK(std::abs(s.eval(0.25) - 0.25) < 1e-12);
  CHECK(std::abs(s.eval(2.9) - 2.9) < 1e-12);
}

TEST_CASE("spline first derivative is continuous across knots") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> t = {0, 0.5, 1.3, 2.0, 2.8, 4.0};
  std::vector<double> y;
  for (size_t i = 0; i < t.size(); ++i) y.push_back(u(rng));
  CubicSpline s(t, y);
  const double eps = 1e-7;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    const double left = (s.eval(t[i]) - s.eval(t[i] - eps)) / eps;
    const double right = (s.eval(t[i] + eps) - s.eval(t[i])) / eps;
    CHECK(std::abs(left - right) < 1e-5);
    CHECK(std::abs(s.derivative(t[i]) - 0.5 * (left + right)) < 1e-5);
  }
}

TEST_CASE("interpolate_trajectory at knots returns knot poses") {
  std::mt19937 rng(23);
  Trajectory traj;
  for (int i = 0; i < 6; ++i)
    traj.samples.push_back({i * 0.5, test::random_pose(rng)});
  std::vector<double> queries;
  for (const auto& s : traj.samples) queries.push_back(s.timestamp);
  const auto poses = interpolate_trajectory(traj, queries);
  for (size_t i = 0; i < poses.size(); ++i) {
    CHECK((poses[i].translation - traj.samples[i].pose.translation).norm() <
          1e-12);
    CHECK(rotation_distance(poses[i].rotation,
                            traj.samples[i].pose.rotation) < 1e-12);
  }
}

TEST_CASE("interpolate_trajectory linear translation") {
  const Trajectory traj = straight_line_traj();
  const std::vector<double> q = {1.5};
  const auto poses = interpolate_trajectory(traj, q);
  CHECK((poses[0].translation - Vec3(1.5, 0, 0)).norm() < 1e-12);
  CHECK(rotation_distance(poses[0].rotation, Quat::Identity()) < 1e-12);
}

TEST_CASE("interpolate_trajectory constant pose") {
  std::mt19937 rng(31);
  const Pose p = test::random_pose(rng);
  Trajectory traj;
  for (int i = 0; i < 5; ++i) traj.samples.push_back({i * 1.0, p});
  const std::vector<double> q = {0.3, 1.9, 3.99};
  for (const auto& out : interpolate_trajectory(traj, q)) {
    CHECK((out.translation - p.translation).norm() < 1e-12);
    CHECK(rotation_distance(out.rotation, p.rotation) < 1e-12);
  }
}

TEST_CASE("interpolate_trajectory hemisphere handling") {
  // Knot quaternions stored with alternating signs represent the same
  // smooth rotation; interpolation must not swing through the far
  // hemisphere.
  Trajectory traj;
  for (int i = 0; i < 5; ++i) {
    Pose p;
    p.rotation = Quat(Eigen::AngleAxisd(0.01 * i, Vec3::UnitZ()));
    if (i % 2) p.rotation.coeffs() = -p.rotation.coeffs();
    traj.samples.push_back({i * 1.0, p});
  }
  const std::vector<double> q = {0.5, 1.5, 2.5, 3.5};
  for (size_t i = 0; i < q.size(); ++i) {
    const auto out = interpolate_trajectory(traj, {&q[i], 1});
    const Quat expected(
        Eigen::AngleAxisd(0.01 * q[i], Vec3::UnitZ()));
    CHECK(rotation_distance(out[0].rotation, expected) < 1e-5);
  }
}

TEST_CASE("interpolate_trajectory error cases") {
  Trajectory small;
  for (int i = 0; i < 3; ++i) small.samples.push_back({i * 1.0, Pose{}});
  CHECK_THROWS_AS(interpolate_trajectory(small, std::vector<double>{0.5}),
                  InsufficientSamples);

  const Trajectory traj = straight_line_traj();
  CHECK_THROWS_AS(interpolate_trajectory(traj, std::vector<double>{3.5}),
                  QueryOutOfRange);
  CHECK_THROWS_AS(interpolate_trajectory(traj, std::vector<double>{-0.1}),
                  QueryOutOfRange);
}
