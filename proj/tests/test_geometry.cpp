#include <doctest.h>

#include <random>

#include "rsgeo/errors.hpp"
#include "rsgeo/geometry.hpp"
#include "rsgeo/synthetic.hpp"
#include "test_util.hpp"

using namespace rsgeo;

namespace {

Intrinsics test_k(int w = 320, int h = 256) {
  Intrinsics k;
  k.fx = k.fy = 100.0;
  k.cx = 160.0;
  k.cy = 128.0;
  k.width = w;
  k.height = h;
  return k;
}

ReadoutClock test_clock(int image_rows = 256) {
  ReadoutClock c;
  c.row_period = 29.4737e-6;
  c.sensor_rows = 1024;
  c.image_rows = image_rows;
  return c;
}

RsFrame flat_frame(int w, int h, double depth) {
  RsFrame f;
  f.image = ImageF(w, h, 1, 100.0f);
  f.depth = synthetic::make_plane_depth(w, h, depth);
  f.clock = test_clock(h);
  f.intrinsics = test_k(w, h);
  return f;
}

CoordinateMap identity_map(int w, int h) {
  CoordinateMap m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      m.set_target(x, y, {double(x), double(y)});
      m.valid.at(x, y) = 1;
    }
  return m;
}

CoordinateMap shifted(const CoordinateMap& m, const Vec2& d) {
  CoordinateMap out = m;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      out.set_target(x, y, m.target(x, y) + d);
  return out;
}

}  // namespace

TEST_CASE("pi_project identity pose") {
  const Intrinsics k = test_k();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ux(0.0, 319.0), uy(0.0, 255.0);
  std::uniform_real_distribution<double> ud(0.2, 8.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 u(ux(rng), uy(rng));
    CHECK((pi_project(u, ud(rng), Pose::identity(), k) - u).norm() < 1e-9);
  }
}

TEST_CASE("pi_project translation") {
  const Intrinsics k = test_k();
  Pose shift;
  shift.translation = {0.1, 0, 0};
  CHECK((pi_project({260, 128}, 2.0, shift, k) - Vec2(265, 128)).norm() <
        1e-9);
}

TEST_CASE("pi_project optical-axis rotation is depth independent") {
  const Intrinsics k = test_k();
  const double theta = 0.2, r = 40.0;
  Pose rot;
  rot.rotation = Quat(Eigen::AngleAxisd(theta, Vec3::UnitZ()));
  for (double d : {0.5, 2.0, 7.3}) {
    const Vec2 out = pi_project({k.cx + r, k.cy}, d, rot, k);
    CHECK((out - Vec2(k.cx + r * std::cos(theta), k.cy + r * std::sin(theta)))
              .norm() < 1e-9);
  }
}

TEST_CASE("pi_project error paths") {
  const Intrinsics k = test_k();
  CHECK_THROWS_AS(pi_project({10, 10}, -1.0, Pose::identity(), k),
                  NonPositiveDepth);
  Pose back;
  back.translation = {0, 0, -5.0};
  CHECK_THROWS_AS(pi_project({160, 128}, 1.0, back, k), BehindCamera);
}

TEST_CASE("correction_map identity rowposes") {
  const RsFrame f = flat_frame(64, 48, 2.0);
  const CoordinateMap m = correction_map(f, identity_rowposes(48));
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      REQUIRE(m.valid.at(x, y));
      CHECK((m.target(x, y) - Vec2(x, y)).norm() < 1e-9);
    }
}

TEST_CASE("correction_map constant translation matches per-pixel oracle") {
  RsFrame f = flat_frame(64, 48, 2.0);
  Pose shift;
  shift.translation = {0.05, -0.02, 0.01};
  RowPoseTable table;
  table.rows.assign(48, shift);
  const CoordinateMap m = correction_map(f, table);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      const Vec2 expect = pi_project({double(x), double(y)}, 2.0, shift,
                                     f.intrinsics);
      // map targets are stored as float32: compare at float precision
      CHECK((m.target(x, y) - expect).norm() < 1e-5);
    }
}

TEST_CASE("correction_map dimension check and invalid depth masking") {
  RsFrame f = flat_frame(32, 24, 2.0);
  CHECK_THROWS_AS(correction_map(f, identity_rowposes(10)), DimensionMismatch);
  f.depth.valid.at(5, 7) = 0;
  const CoordinateMap m = correction_map(f, identity_rowposes(24));
  CHECK(!m.valid.at(5, 7));
  CHECK(m.valid.at(6, 7));
}

TEST_CASE("epe basic values") {
  const CoordinateMap gt = identity_map(20, 10);
  CHECK(epe(gt, gt).mean_px == 0.0);
  CHECK(epe(shifted(gt, {1, 0}), gt).mean_px == doctest::Approx(1.0));
  CHECK(epe(shifted(gt, {3, 4}), gt).mean_px == doctest::Approx(5.0));
  CHECK(epe(shifted(gt, {3, 4}), gt).median_px == doctest::Approx(5.0));
}

TEST_CASE("epe symmetry and empty overlap") {
  std::mt19937 rng(9);
  CoordinateMap a = identity_map(16, 16);
  CoordinateMap b = identity_map(16, 16);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x)
      b.set_target(x, y, b.target(x, y) + Vec2(u(rng), u(rng)));
  CHECK(epe(a, b).mean_px == doctest::Approx(epe(b, a).mean_px));

  CoordinateMap empty(16, 16);
  CHECK_THROWS_AS(epe(a, empty), EmptyOverlap);
}

TEST_CASE("bidirectional_filter") {
  const int w = 32, h = 24;
  FlowField fwd(w, h), bwd(w, h);
  SUBCASE("perfect consistency") {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        fwd.set(x, y, {2.0, 1.0});
        bwd.set(x, y, {-2.0, -1.0});
      }
    const Mask m = bidirectional_filter(fwd, bwd, 0.01);
    for (int y = 0; y < h - 1; ++y)
      for (int x = 0; x < w - 2; ++x) CHECK(m.at(x, y));
  }
  SUBCASE("inconsistent flow rejected") {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) fwd.set(x, y, {5.0, 0.0});
    const Mask m = bidirectional_filter(fwd, bwd, 1.0);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) CHECK(!m.at(x, y));
  }
  SUBCASE("residual at tolerance boundary") {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        fwd.set(x, y, {5.0, 0.0});
        bwd.set(x, y, {-4.5, 0.0});
      }
    const Mask m = bidirectional_filter(fwd, bwd, 1.0);
    CHECK(m.at(3, 5));  // error 0.5 within tol 1
    const Mask tight = bidirectional_filter(fwd, bwd, 0.25);
    CHECK(!tight.at(3, 5));
  }
  SUBCASE("dimension mismatch") {
    FlowField small(8, 8);
    CHECK_THROWS_AS(bidirectional_filter(fwd, small, 1.0), DimensionMismatch);
  }
}

TEST_CASE("constant_velocity_rowposes") {
  const ReadoutClock clock = test_clock(256);
  SUBCASE("zero twist") {
    const RowPoseTable t = constant_velocity_rowposes({}, clock, 256);
    for (const auto& p : t.rows) CHECK(test::pose_near(p, Pose::identity()));
  }
  SUBCASE("angular closed form") {
    Twist v;
    v.angular = {0, 0, 3.0};
    const RowPoseTable t = constant_velocity_rowposes(v, clock, 256);
    const double step = 4 * 29.4737e-6;
    for (int r = 0; r < 256; r += 17) {
      const Vec3 lg = rotation_log(t.rows[r].rotation);
      CHECK((lg - Vec3(0, 0, 3.0 * r * step)).norm() < 1e-12);
    }
  }
  SUBCASE("linear only scales linearly") {
    Twist v;
    v.linear = {0.5, 0, -0.25};
    const RowPoseTable t1 = constant_velocity_rowposes(v, clock, 256);
    v.linear *= 2.0;
    const RowPoseTable t2 = constant_velocity_rowposes(v, clock, 256);
    for (int r = 0; r < 256; r += 31) {
      CHECK(rotation_distance(t1.rows[r].rotation, Quat::Identity()) == 0.0);
      CHECK((t2.rows[r].translation - 2.0 * t1.rows[r].translation).norm() ==
            0.0);
    }
  }
}

TEST_CASE("identity_rowposes") {
  CHECK(identity_rowposes(0).size() == 0);
  const RowPoseTable t = identity_rowposes(16);
  CHECK(t.size() == 16);
  RsFrame f = flat_frame(16, 16, 3.0);
  const CoordinateMap m = correction_map(f, t);
  CHECK(epe(m, identity_map(16, 16)).mean_px < 1e-9);
}

TEST_CASE("fit_constant_velocity recovers an exact constant twist") {
  const ReadoutClock clock = test_clock(256);
  Twist v;
  v.angular = {0.4, -0.2, 1.0};
  v.linear = {0.1, 0.05, -0.3};
  const RowPoseTable t = constant_velocity_rowposes(v, clock, 256);
  const Twist fit = fit_constant_velocity(t, clock);
  CHECK((fit.angular - v.angular).norm() < 1e-6);
  CHECK((fit.linear - v.linear).norm() < 1e-9);
}

TEST_CASE("render_corrected") {
  SUBCASE("identity map copies image with no holes") {
    RsFrame f = flat_frame(32, 24, 2.0);
    std::mt19937 rng(4);
    std::uniform_real_distribution<float> u(0.f, 255.f);
    for (auto& v : f.image.data) v = u(rng);
    const RenderResult r = render_corrected(f, identity_map(32, 24));
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 32; ++x) {
        REQUIRE(r.filled.at(x, y));
        CHECK(r.image.at(x, y) == f.image.at(x, y));
      }
  }
  SUBCASE("uniform shift leaves boundary holes") {
    RsFrame f = flat_frame(32, 24, 2.0);
    const RenderResult r =
        render_corrected(f, shifted(identity_map(32, 24), {2, 0}));
    for (int y = 0; y < 24; ++y) {
      CHECK(!r.filled.at(0, y));
      CHECK(!r.filled.at(1, y));
      for (int x = 2; x < 32; ++x) CHECK(r.filled.at(x, y));
    }
  }
  SUBCASE("z-buffer keeps nearest source") {
    RsFrame f = flat_frame(8, 1, 2.0);
    f.depth.values.at(3, 0) = 1.0f;  // nearer
    f.image.at(3, 0) = 10.0f;
    f.image.at(5, 0) = 200.0f;
    CoordinateMap m(8, 1);
    m.depth.data.clear();  // force fallback to frame depth
    m.set_target(3, 0, {6, 0});
    m.valid.at(3, 0) = 1;
    m.set_target(5, 0, {6, 0});
    m.valid.at(5, 0) = 1;
    const RenderResult r = render_corrected(f, m);
    CHECK(r.image.at(6, 0) == 10.0f);
  }
}

TEST_CASE("fill_holes") {
  SUBCASE("no holes unchanged") {
    ImageF img(16, 16, 1, 42.0f);
    Mask full(16, 16, 1, 1);
    const FillResult r = fill_holes(img, full, 3);
    for (auto v : r.image.data) CHECK(v == 42.0f);
  }
  SUBCASE("single hole in constant field") {
    ImageF img(9, 9, 1, 7.0f);
    Mask mask(9, 9, 1, 1);
    mask.at(4, 4) = 0;
    img.at(4, 4) = 0.0f;
    const FillResult r = fill_holes(img, mask, 3);
    CHECK(r.filled.at(4, 4));
    CHECK(r.image.at(4, 4) == doctest::Approx(7.0));
  }
  SUBCASE("hole between two values averages by symmetric weights") {
    ImageF img(5, 1, 1, 0.0f);
    Mask mask(5, 1, 1, 0);
    mask.at(1, 0) = 1;
    img.at(1, 0) = 0.0f;
    mask.at(3, 0) = 1;
    img.at(3, 0) = 100.0f;
    const FillResult r = fill_holes(img, mask, 1);
    CHECK(r.image.at(2, 0) == doctest::Approx(50.0));
  }
  SUBCASE("unreachable hole stays marked") {
    ImageF img(32, 1, 1, 5.0f);
    Mask mask(32, 1, 1, 0);
    mask.at(0, 0) = 1;
    const FillResult r = fill_holes(img, mask, 2);
    CHECK(!r.filled.at(20, 0));
    CHECK(r.filled.at(1, 0));
  }
}
