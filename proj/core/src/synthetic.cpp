#include "rsgeo/synthetic.hpp"

#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace rsgeo {
namespace synthetic {

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Sum of a few random sinusoids over the unit square, output in [0, 1].
ImageF random_field(int width, int height, std::uint32_t seed, int waves) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> freq(0.5, 4.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_real_distribution<double> amp(0.3, 1.0);

  struct Wave { double fx, fy, ph, a; };
  std::vector<Wave> ws(waves);
  double asum = 0.0;
  for (auto& w : ws) {
    w = {freq(rng), freq(rng), phase(rng), amp(rng)};
    asum += w.a;
  }

  ImageF img(width, height, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / width;
      const double v = static_cast<double>(y) / height;
      double s = 0.0;
      for (const auto& w : ws)
        s += w.a * std::sin(kTwoPi * (w.fx * u + w.fy * v) + w.ph);
      img.at(x, y) = static_cast<float>(0.5 + 0.5 * s / asum);
    }
  }
  return img;
}

}  // namespace

ImageF make_texture(int width, int height, std::uint32_t seed) {
  ImageF img = random_field(width, height, seed, 6);
  for (auto& v : img.data) v *= 255.0f;
  return img;
}

DepthMap make_plane_depth(int width, int height, double depth_m) {
  DepthMap d(width, height);
  for (auto& v : d.values.data) v = static_cast<float>(depth_m);
  for (auto& v : d.valid.data) v = 1;
  return d;
}

DepthMap make_smooth_depth(int width, int height, double near_m, double far_m,
                           std::uint32_t seed) {
  const ImageF field = random_field(width, height, seed, 4);
  DepthMap d(width, height);
  for (size_t i = 0; i < field.data.size(); ++i)
    d.values.data[i] =
        static_cast<float>(near_m + (far_m - near_m) * field.data[i]);
  for (auto& v : d.valid.data) v = 1;
  return d;
}

RowPoseTable make_smooth_rowposes(int rows, const ReadoutClock& clock,
                                  double max_angular_rate,
                                  double max_linear_rate, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> freq(3.0, 15.0);  // Hz
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_real_distribution<double> amp(0.2, 1.0);

  struct Axis { double f, ph, a; };
  std::array<Axis, 3> wax, vax;
  for (auto& a : wax) a = {freq(rng), phase(rng), amp(rng) * max_angular_rate};
  for (auto& a : vax) a = {freq(rng), phase(rng), amp(rng) * max_linear_rate};

  auto omega = [&](double t) {
    Vec3 w;
    for (int i = 0; i < 3; ++i)
      w[i] = wax[i].a * std::sin(kTwoPi * wax[i].f * t + wax[i].ph);
    return w;
  };
  // Position is the analytic integral of the sinusoidal velocity.
  auto position = [&](double t) {
    Vec3 p;
    for (int i = 0; i < 3; ++i) {
      const double k = kTwoPi * vax[i].f;
      p[i] = vax[i].a / k *
             (std::cos(vax[i].ph) - std::cos(k * t + vax[i].ph));
    }
    return p;
  };

  const double step = clock.row_scale() * clock.row_period;
  constexpr int kSub = 16;  // fine substeps keep integration error tiny

  RowPoseTable table;
  table.rows.reserve(rows);
  Quat r = Quat::Identity();
  for (int row = 0; row < rows; ++row) {
    Pose p;
    p.rotation = r;
    p.translation = position(row * step);
    table.rows.push_back(p.canonical());
    const double t0 = row * step;
    const double dt = step / kSub;
    for (int k = 0; k < kSub; ++k)
      r = (r * rotation_exp(omega(t0 + (k + 0.5) * dt) * dt)).normalized();
  }
  if (!table.rows.empty()) table.rows[0] = Pose::identity();
  return table;
}

AnalyticFlow make_analytic_flow(const DepthMap& rs_depth,
                                const RowPoseTable& rowposes,
                                const Pose& gs0_from_rs_row0,
                                const Intrinsics& k_rs,
                                const Intrinsics& k_gs0) {
  const int w = rs_depth.width(), h = rs_depth.height();
  AnalyticFlow out;
  out.fwd = FlowField(w, h);
  out.bwd = FlowField(k_gs0.width, k_gs0.height);
  out.fwd_valid = Mask(w, h, 1, 0);

  for (int y = 0; y < h; ++y) {
    const Pose rowpose = rowposes.at_row(y);
    const Pose gs0_from_rsrow = compose(gs0_from_rs_row0, rowpose);
    for (int x = 0; x < w; ++x) {
      if (!rs_depth.valid.at(x, y)) continue;
      const Vec2 u(x, y);
      const Vec3 pt = transform_point(
          gs0_from_rsrow,
          backproject(k_rs, u, rs_depth.values.at(x, y)));
      if (pt.z() <= 1e-9) continue;
      out.fwd.set(x, y, project(k_gs0, pt) - u);
      out.fwd_valid.at(x, y) = 1;
    }
  }

  // Backward flow by fixed-point inversion of the forward field.
  constexpr float kReject = 1e6f;
  for (int y = 0; y < out.bwd.height(); ++y) {
    for (int x = 0; x < out.bwd.width(); ++x) {
      const Vec2 v(x, y);
      Vec2 u = v;
      bool ok = false;
      for (int it = 0; it < 30; ++it) {
        if (!out.fwd.uv.in_bounds(u.x(), u.y())) break;
        const Vec2 f(sample_bilinear(out.fwd.uv, u.x(), u.y(), 0),
                     sample_bilinear(out.fwd.uv, u.x(), u.y(), 1));
        const Vec2 res = u + f - v;
        u -= res;
        if (res.norm() < 1e-9) { ok = true; break; }
      }
      if (ok)
        out.bwd.set(x, y, u - v);
      else
        out.bwd.set(x, y, Vec2(kReject, kReject));
    }
  }
  return out;
}

}  // namespace synthetic
}  // namespace rsgeo
