#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsgeo/geometry.hpp"
#include "rsgeo/imu.hpp"
#include "rsgeo/trajectory.hpp"

namespace rsgeo {

/// One RS/GS0 image pair plus its flow files and trigger timestamp.
struct FrameEntry {
  std::string id;
  double timestamp = 0.0;  // frame trigger = row-0 capture time
  std::string rs_image;
  std::string gs0_image;
  std::string flow_fwd;  // RS -> GS0
  std::string flow_bwd;  // GS0 -> RS
};

/// Everything needed to run ground-truth generation on one sequence.
struct SequenceManifest {
  Intrinsics rs_intrinsics;
  Intrinsics gs0_intrinsics;
  ReadoutClock clock;
  Pose gs0_from_rs_row0;  // stereo extrinsics at the row-0 reference
  std::optional<ScanlineLUT> lut;
  Trajectory trajectory;      // world_from_rs_camera
  std::optional<ImuSeries> imu;
  std::vector<FrameEntry> frames;
  double flow_tol_px = 1.0;
  double valid_fraction_threshold = 0.25;
};

struct GroundTruthFrame {
  DepthMap depth;
  RowPoseTable rowposes;
  CoordinateMap gt_map;
  ImageF gs1_image;
  Mask gs1_filled;
  double valid_fraction = 0.0;
  bool flagged_low_valid = false;
};

struct ExportSummary {
  int frames_in = 0;
  int frames_kept = 0;
  int frames_dropped = 0;
  double mean_valid_fraction = 0.0;
  std::vector<std::string> drop_reasons;  // one per dropped frame
};

// Manifest config keys: calib, trajectory, frames, and optionally imu,
// lut, flow_tol_px, valid_fraction_threshold. Paths are resolved
// relative to the manifest file. "frames" is a CSV with header
// "frame_id,timestamp,rs_image,gs0_image,flow_fwd,flow_bwd".
SequenceManifest load_manifest(const std::string& path);

// Row-pose table for one frame: spline-interpolated world poses at the
// row times, re-expressed as T_rowr_to_row0. Throws QueryOutOfRange
// when the trajectory does not cover the frame readout.
RowPoseTable row_pose_tables(const Trajectory& traj, double frame_time,
                             const ReadoutClock& clock, int rows,
                             const ScanlineLUT* lut = nullptr);

// Full ground-truth pipeline for one frame: bi-directional flow filter,
// per-row triangulation, correction map, splat + hole fill.
GroundTruthFrame generate_frame(const SequenceManifest& manifest,
                                int frame_index, const FlowField& flow_fwd,
                                const FlowField& flow_bwd);

// Runs the pipeline over every frame and writes
// out/<frame_id>/{rs.png, gs1.png, depth.pfm, gtmap.pfm, rowposes.txt}
// plus summary.csv. Creates an INCOMPLETE marker file on I/O failure.
ExportSummary export_dataset(const SequenceManifest& manifest,
                             const std::string& out_dir);

// Per-frame row poses in trajectory format, one line per row; the
// timestamp column is the row capture time.
void save_rowposes(const RowPoseTable& table, const ReadoutClock& clock,
                   const std::string& path);
RowPoseTable load_rowposes(const std::string& path);

}  // namespace rsgeo
