#pragma once

#include <cstdint>

#include "rsgeo/geometry.hpp"

namespace rsgeo {
namespace synthetic {

// Smooth procedural grayscale texture in [0, 255].
ImageF make_texture(int width, int height, std::uint32_t seed);

// Fronto-parallel plane at constant depth.
DepthMap make_plane_depth(int width, int height, double depth_m);

// Smooth random depth field in [near_m, far_m].
DepthMap make_smooth_depth(int width, int height, double near_m, double far_m,
                           std::uint32_t seed);

// Smooth random row-pose table from sinusoidal angular/linear velocity
// profiles (non-zero jerk). Magnitudes are peak rates.
RowPoseTable make_smooth_rowposes(int rows, const ReadoutClock& clock,
                                  double max_angular_rate,
                                  double max_linear_rate, std::uint32_t seed);

// Analytic flow pair consistent with known RS depth, row poses and
// stereo extrinsics: fwd maps RS pixels to GS0, bwd is its fixed-point
// inverse on the GS0 grid. Used to drive the dataset pipeline with
// exact correspondences.
struct AnalyticFlow {
  FlowField fwd;
  FlowField bwd;
  Mask fwd_valid;
};
AnalyticFlow make_analytic_flow(const DepthMap& rs_depth,
                                const RowPoseTable& rowposes,
                                const Pose& gs0_from_rs_row0,
                                const Intrinsics& k_rs,
                                const Intrinsics& k_gs0);

}  // namespace synthetic
}  // namespace rsgeo
