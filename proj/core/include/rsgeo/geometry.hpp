#pragma once

#include <optional>

#include "rsgeo/camera.hpp"
#include "rsgeo/image.hpp"
#include "rsgeo/pose.hpp"

namespace rsgeo {

/// Rolling-shutter frame bundle: image, per-pixel depth, readout
/// timing, intrinsics and the scan-line lookup table.
struct RsFrame {
  ImageF image;  // grayscale, [0, 255]
  DepthMap depth;
  ReadoutClock clock;
  Intrinsics intrinsics;
  ScanlineLUT lut;
};

/// Rigid body velocity: angular (rad/s) and linear (m/s).
struct Twist {
  Vec3 angular = Vec3::Zero();
  Vec3 linear = Vec3::Zero();
};

struct EpeStats {
  double mean_px = 0.0;
  double median_px = 0.0;
  double max_px = 0.0;
  long valid_count = 0;
};

struct TriangulationResult {
  Vec3 point;       // in the RS-row frame
  double depth;     // point.z()
  double residual;  // closest distance between the two rays, meters
};

struct RenderResult {
  ImageF image;
  ImageF depth;  // z-buffer contents where filled
  Mask filled;   // 1 = written by a source pixel, 0 = hole
};

struct SynthesisResult {
  RsFrame frame;
  CoordinateMap gt_map;  // exact RS -> GS1 coordinates used for synthesis
};

// Back-project pixel u at depth d, transform by T, re-project.
Vec2 pi_project(const Vec2& u, double d, const Pose& T, const Intrinsics& k);

// Per-pixel RS -> GS1 coordinates: pi_project with the row pose looked
// up at each pixel's (fractional) sensor row. Invalid-depth and
// behind-camera pixels are masked out. Fills the depth channel with the
// projected z.
CoordinateMap correction_map(const RsFrame& frame, const RowPoseTable& rowposes);

// Mean Euclidean distance between the two maps over jointly valid
// pixels. Throws EmptyOverlap when no pixel is valid in both.
EpeStats epe(const CoordinateMap& pred, const CoordinateMap& gt);

// Midpoint two-view triangulation. gs0_from_rsrow maps RS-row-frame
// coordinates into the GS0 camera frame (for a GS0 camera displaced by
// (-b, 0, 0) in the RS frame this is a translation by (+b, 0, 0)).
// Throws DegenerateRays for (anti)parallel rays and NegativeDepth when
// the solution lies behind the RS camera.
TriangulationResult triangulate(const Vec2& u_gs0, const Vec2& u_rs,
                                const Pose& gs0_from_rsrow,
                                const Intrinsics& k_rs,
                                const Intrinsics& k_gs0);

// Forward/backward flow consistency: pixel u is valid iff
// |fwd(u) + bwd(u + fwd(u))| <= tol_px, with bilinear sampling of bwd.
// Targets outside the image are invalid.
Mask bidirectional_filter(const FlowField& flow_fwd, const FlowField& flow_bwd,
                          double tol_px);

// Renders an RS frame from a GS image + depth defined in the row-0
// frame by inverting the per-row warp (fixed-point iteration per
// pixel). Returns the frame together with the exact ground-truth
// coordinate map. Non-converged pixels and holes are masked invalid.
SynthesisResult synthesize_rs(const ImageF& gs_image, const DepthMap& gs_depth,
                              const RowPoseTable& rowposes, const Intrinsics& k,
                              const ReadoutClock& clock, const ScanlineLUT& lut);

// Row r: rotation exp(angular * t_r), translation linear * t_r, with
// t_r the sensor-row time offset from row 0.
RowPoseTable constant_velocity_rowposes(const Twist& v,
                                        const ReadoutClock& clock, int rows);

RowPoseTable identity_rowposes(int rows);

// Least-squares constant-twist fit to a row-pose table (regression
// through the origin against each row's time offset).
Twist fit_constant_velocity(const RowPoseTable& table,
                            const ReadoutClock& clock);

// Forward-splats each valid source pixel to round(map(u)) with a
// z-buffer on projected depth; smaller depth wins, ties keep the
// first source in row-major order. Untouched targets are holes.
RenderResult render_corrected(const RsFrame& frame, const CoordinateMap& map);

// Inverse-distance-weighted fill of holes from filled pixels within
// radius_px; holes with no filled neighbor stay marked in the returned
// mask.
struct FillResult {
  ImageF image;
  Mask filled;  // 1 everywhere except unfillable holes
};
FillResult fill_holes(const ImageF& sparse, const Mask& filled, int radius_px);

}  // namespace rsgeo
