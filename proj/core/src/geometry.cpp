#include "rsgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rsgeo/errors.hpp"

namespace rsgeo {

namespace {

const ScanlineLUT* lut_or_null(const RsFrame& frame) {
  return frame.lut.table.data.empty() ? nullptr : &frame.lut;
}

// Fractional image-row index for pose lookup from a fractional sensor row.
double image_row_of(const ReadoutClock& clock, double sensor_row) {
  return sensor_row / clock.row_scale();
}

}  // namespace

Vec2 pi_project(const Vec2& u, double d, const Pose& T, const Intrinsics& k) {
  return project(k, transform_point(T, backproject(k, u, d)));
}

CoordinateMap correction_map(const RsFrame& frame,
                             const RowPoseTable& rowposes) {
  const int w = frame.depth.width();
  const int h = frame.depth.height();
  if (rowposes.size() != h)
    throw DimensionMismatch("row-pose table has " +
                            std::to_string(rowposes.size()) + " rows, image " +
                            std::to_string(h));
  const ScanlineLUT* lut = lut_or_null(frame);

  CoordinateMap map(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!frame.depth.valid.at(x, y)) continue;
      const Vec2 u(x, y);
      const double srow = sensor_row(frame.clock, lut, u);
      const Pose pose = rowposes.at_row(image_row_of(frame.clock, srow));
      const Vec3 pt =
          transform_point(pose, backproject(frame.intrinsics, u,
                                            frame.depth.values.at(x, y)));
      if (pt.z() <= 1e-9) continue;  // behind camera: masked out
      map.set_target(x, y, project(frame.intrinsics, pt));
      map.depth.at(x, y) = static_cast<float>(pt.z());
      map.valid.at(x, y) = 1;
    }
  }
  return map;
}

EpeStats epe(const CoordinateMap& pred, const CoordinateMap& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw DimensionMismatch("coordinate map dimensions differ");
  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(pred.width()) * pred.height());
  double sum = 0.0, maxd = 0.0;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (!pred.valid.at(x, y) || !gt.valid.at(x, y)) continue;
      const double d = (pred.target(x, y) - gt.target(x, y)).norm();
      dists.push_back(d);
      sum += d;
      maxd = std::max(maxd, d);
    }
  }
  if (dists.empty()) throw EmptyOverlap("no jointly valid pixels");

  EpeStats s;
  s.valid_count = static_cast<long>(dists.size());
  s.mean_px = sum / dists.size();
  s.max_px = maxd;
  const size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  s.median_px = dists[mid];
  if (dists.size() % 2 == 0) {
    const double lo = *std::max_element(dists.begin(), dists.begin() + mid);
    s.median_px = 0.5 * (s.median_px + lo);
  }
  return s;
}

TriangulationResult triangulate(const Vec2& u_gs0, const Vec2& u_rs,
                                const Pose& gs0_from_rsrow,
                                const Intrinsics& k_rs,
                                const Intrinsics& k_gs0) {
  // Both rays in the RS-row frame.
  const Pose rs_from_gs0 = invert(gs0_from_rsrow);
  const Vec3 o1 = Vec3::Zero();
  const Vec3 d1 = backproject(k_rs, u_rs, 1.0).normalized();
  const Vec3 o2 = rs_from_gs0.translation;
  const Vec3 d2 =
      (rs_from_gs0.rotation * backproject(k_gs0, u_gs0, 1.0)).normalized();

  const double cross_norm = d1.cross(d2).norm();  // = sin(angle)
  if (cross_norm < 1e-6)
    throw DegenerateRays("triangulation rays are (anti)parallel, sin = " +
                         std::to_string(cross_norm));

  // Closest points: o1 + s*d1 and o2 + t*d2.
  const Vec3 w0 = o2 - o1;
  const double b = d1.dot(d2);
  const double denom = 1.0 - b * b;  // unit directions
  const double s = (d1.dot(w0) - b * d2.dot(w0)) / denom;
  const double t = (b * d1.dot(w0) - d2.dot(w0)) / denom;

  const Vec3 p1 = o1 + s * d1;
  const Vec3 p2 = o2 + t * d2;
  TriangulationResult r;
  r.point = 0.5 * (p1 + p2);
  r.depth = r.point.z();
  r.residual = (p1 - p2).norm();
  if (r.depth <= 0.0)
    throw NegativeDepth("triangulated point behind camera, z = " +
                        std::to_string(r.depth));
  return r;
}

Mask bidirectional_filter(const FlowField& flow_fwd, const FlowField& flow_bwd,
                          double tol_px) {
  const int w = flow_fwd.width(), h = flow_fwd.height();
  if (flow_bwd.width() != w || flow_bwd.height() != h)
    throw DimensionMismatch("flow field dimensions differ");

  Mask mask(w, h, 1, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec2 fwd = flow_fwd.at(x, y);
      const double tx = x + fwd.x(), ty = y + fwd.y();
      if (!flow_bwd.uv.in_bounds(tx, ty)) continue;
      const Vec2 bwd(sample_bilinear(flow_bwd.uv, tx, ty, 0),
                     sample_bilinear(flow_bwd.uv, tx, ty, 1));
      if ((fwd + bwd).norm() <= tol_px) mask.at(x, y) = 1;
    }
  }
  return mask;
}

SynthesisResult synthesize_rs(const ImageF& gs_image, const DepthMap& gs_depth,
                              const RowPoseTable& rowposes, const Intrinsics& k,
                              const ReadoutClock& clock,
                              const ScanlineLUT& lut) {
  const int w = gs_image.width, h = gs_image.height;
  if (gs_depth.width() != w || gs_depth.height() != h ||
      rowposes.size() != h)
    throw DimensionMismatch("synthesis input dimensions disagree");
  const ScanlineLUT* lutp = lut.table.data.empty() ? nullptr : &lut;

  constexpr int kMaxIter = 15;
  constexpr double kConvergedPx = 1e-6;

  SynthesisResult out;
  out.frame.image = ImageF(w, h, 1);
  out.frame.depth = DepthMap(w, h);
  out.frame.clock = clock;
  out.frame.intrinsics = k;
  out.frame.lut = lut;
  out.gt_map = CoordinateMap(w, h);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec2 u(x, y);
      const double srow = sensor_row(clock, lutp, u);
      const Pose row_from_gs = invert(rowposes.at_row(image_row_of(clock, srow)));

      // Fixed point on the GS pixel whose warped position lands on u.
      // warp_at evaluates the candidate; the final stored (g, point)
      // pair always comes from one consistent evaluation.
      Vec3 point_rs = Vec3::Zero();
      double gs_d = 0.0;
      auto warp_at = [&](const Vec2& g, Vec2* projected) {
        if (!gs_image.in_bounds(g.x(), g.y())) return false;
        const int gx = std::clamp(static_cast<int>(std::floor(g.x())), 0, w - 2);
        const int gy = std::clamp(static_cast<int>(std::floor(g.y())), 0, h - 2);
        if (!gs_depth.valid.at(gx, gy) || !gs_depth.valid.at(gx + 1, gy) ||
            !gs_depth.valid.at(gx, gy + 1) ||
            !gs_depth.valid.at(gx + 1, gy + 1))
          return false;
        gs_d = sample_bilinear(gs_depth.values, g.x(), g.y());
        const Vec3 pt = transform_point(row_from_gs, backproject(k, g, gs_d));
        if (pt.z() <= 1e-9) return false;
        *projected = project(k, pt);
        point_rs = pt;
        return true;
      };

      Vec2 g = u;
      Vec2 p;
      double err = std::numeric_limits<double>::infinity();
      bool ok = false;
      for (int it = 0; it < kMaxIter; ++it) {
        if (!warp_at(g, &p)) { ok = false; break; }
        err = (u - p).norm();
        if (err < kConvergedPx) { ok = true; break; }
        g += u - p;
        ok = false;
      }
      if (!ok) continue;

      out.frame.image.at(x, y) =
          static_cast<float>(sample_bilinear(gs_image, g.x(), g.y()));
      out.frame.depth.values.at(x, y) = static_cast<float>(point_rs.z());
      out.frame.depth.valid.at(x, y) = 1;
      out.gt_map.set_target(x, y, g);
      out.gt_map.depth.at(x, y) = static_cast<float>(gs_d);
      out.gt_map.valid.at(x, y) = 1;
    }
  }
  return out;
}

RowPoseTable constant_velocity_rowposes(const Twist& v,
                                        const ReadoutClock& clock, int rows) {
  RowPoseTable table;
  table.rows.reserve(rows);
  const double step = clock.row_scale() * clock.row_period;
  for (int r = 0; r < rows; ++r) {
    const double t = r * step;
    Pose p;
    p.rotation = rotation_exp(v.angular * t);
    p.translation = v.linear * t;
    table.rows.push_back(p);
  }
  return table;
}

RowPoseTable identity_rowposes(int rows) {
  RowPoseTable table;
  table.rows.assign(std::max(rows, 0), Pose::identity());
  return table;
}

Twist fit_constant_velocity(const RowPoseTable& table,
                            const ReadoutClock& clock) {
  const double step = clock.row_scale() * clock.row_period;
  double tt = 0.0;
  Vec3 ang = Vec3::Zero(), lin = Vec3::Zero();
  for (int r = 0; r < table.size(); ++r) {
    const double t = r * step;
    tt += t * t;
    ang += t * rotation_log(table.rows[r].rotation);
    lin += t * table.rows[r].translation;
  }
  Twist v;
  if (tt > 0.0) {
    v.angular = ang / tt;
    v.linear = lin / tt;
  }
  return v;
}

RenderResult render_corrected(const RsFrame& frame, const CoordinateMap& map) {
  const int w = frame.image.width, h = frame.image.height;
  if (map.width() != w || map.height() != h)
    throw DimensionMismatch("map and frame dimensions differ");

  RenderResult out;
  out.image = ImageF(w, h, 1);
  out.depth = ImageF(w, h, 1, std::numeric_limits<float>::infinity());
  out.filled = Mask(w, h, 1, 0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!map.valid.at(x, y)) continue;
      const Vec2 t = map.target(x, y);
      const int tx = static_cast<int>(std::lround(t.x()));
      const int ty = static_cast<int>(std::lround(t.y()));
      if (tx < 0 || ty < 0 || tx >= w || ty >= h) continue;
      const float d = map.has_depth() && map.depth.at(x, y) > 0.0f
                          ? map.depth.at(x, y)
                          : frame.depth.values.at(x, y);
      if (d < out.depth.at(tx, ty)) {  // strict: row-major first wins ties
        out.depth.at(tx, ty) = d;
        out.image.at(tx, ty) = frame.image.at(x, y);
        out.filled.at(tx, ty) = 1;
      }
    }
  }
  return out;
}

FillResult fill_holes(const ImageF& sparse, const Mask& filled, int radius_px) {
  const int w = sparse.width, h = sparse.height;
  if (filled.width != w || filled.height != h)
    throw DimensionMismatch("fill mask dimensions differ");
  if (radius_px < 1) throw OutOfBounds("fill radius must be >= 1");

  FillResult out;
  out.image = sparse;
  out.filled = filled;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (filled.at(x, y)) continue;
      double wsum = 0.0, vsum = 0.0;
      for (int dy = -radius_px; dy <= radius_px; ++dy) {
        for (int dx = -radius_px; dx <= radius_px; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (!filled.at(nx, ny)) continue;
          const double dist = std::sqrt(double(dx * dx + dy * dy));
          if (dist > radius_px || dist == 0.0) continue;
          const double wgt = 1.0 / dist;
          wsum += wgt;
          vsum += wgt * sparse.at(nx, ny);
        }
      }
      if (wsum > 0.0) {
        out.image.at(x, y) = static_cast<float>(vsum / wsum);
        out.filled.at(x, y) = 1;
      }
    }
  }
  return out;
}

}  // namespace rsgeo
