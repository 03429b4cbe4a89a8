#include "rsgeo/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rsgeo/errors.hpp"
#include "rsgeo/io.hpp"

namespace fs = std::filesystem;

namespace rsgeo {

namespace {

std::string resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute()) return path.string();
  return (base / path).string();
}

std::vector<FrameEntry> load_frames_csv(const std::string& path,
                                        const fs::path& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open frames CSV: " + path);
  std::vector<FrameEntry> frames;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first) {
      first = false;
      if (line.find("frame_id") != std::string::npos) continue;
    }
    std::istringstream ss(line);
    FrameEntry e;
    std::string ts;
    auto field = [&](std::string& dst) {
      if (!std::getline(ss, dst, ',')) throw IoError("short CSV row: " + line);
    };
    field(e.id);
    field(ts);
    e.timestamp = std::stod(ts);
    field(e.rs_image);
    field(e.gs0_image);
    field(e.flow_fwd);
    field(e.flow_bwd);
    e.rs_image = resolve(base, e.rs_image);
    e.gs0_image = resolve(base, e.gs0_image);
    e.flow_fwd = resolve(base, e.flow_fwd);
    e.flow_bwd = resolve(base, e.flow_bwd);
    frames.push_back(e);
  }
  return frames;
}

}  // namespace

SequenceManifest load_manifest(const std::string& path) {
  const fs::path base = fs::path(path).parent_path();
  const io::Config m = io::load_config(path);

  const io::Config calib =
      io::load_config(resolve(base, io::config_str(m, "calib")));

  SequenceManifest out;
  out.rs_intrinsics = io::intrinsics_from_config(calib);
  out.gs0_intrinsics = io::intrinsics_from_config(calib, "gs0_");
  out.clock = io::clock_from_config(calib);
  out.gs0_from_rs_row0.translation = {io::config_num(calib, "gs0_from_rs_tx"),
                                      io::config_num(calib, "gs0_from_rs_ty"),
                                      io::config_num(calib, "gs0_from_rs_tz")};
  out.gs0_from_rs_row0.rotation =
      Quat(io::config_num(calib, "gs0_from_rs_qw"),
           io::config_num(calib, "gs0_from_rs_qx"),
           io::config_num(calib, "gs0_from_rs_qy"),
           io::config_num(calib, "gs0_from_rs_qz"))
          .normalized();

  out.trajectory =
      load_trajectory_tum(resolve(base, io::config_str(m, "trajectory")));
  if (io::config_has(m, "imu"))
    out.imu = load_imu_csv(resolve(base, io::config_str(m, "imu")));
  if (io::config_has(m, "lut"))
    out.lut = io::load_lut_pfm(resolve(base, io::config_str(m, "lut")));
  out.frames = load_frames_csv(resolve(base, io::config_str(m, "frames")), base);
  out.flow_tol_px = io::config_num(m, "flow_tol_px", 1.0);
  out.valid_fraction_threshold =
      io::config_num(m, "valid_fraction_threshold", 0.25);
  return out;
}

RowPoseTable row_pose_tables(const Trajectory& traj, double frame_time,
                             const ReadoutClock& clock, int rows,
                             const ScanlineLUT* lut) {
  ReadoutClock c = clock;
  c.frame_start = frame_time;
  // Row times of the left-most pixel; the per-pixel LUT refinement is
  // applied downstream via fractional table lookups.
  std::vector<double> times(rows);
  for (int r = 0; r < rows; ++r)
    times[r] = row_time(c, lut, Vec2(0.0, r));

  const std::vector<Pose> world = interpolate_trajectory(traj, times);
  RowPoseTable table;
  table.rows.reserve(rows);
  for (int r = 0; r < rows; ++r)
    table.rows.push_back(relative_pose(world[0], world[r]).canonical());
  if (!table.rows.empty()) table.rows[0] = Pose::identity();
  return table;
}

GroundTruthFrame generate_frame(const SequenceManifest& manifest,
                                int frame_index, const FlowField& flow_fwd,
                                const FlowField& flow_bwd) {
  const FrameEntry& entry = manifest.frames.at(frame_index);
  const Intrinsics& k_rs = manifest.rs_intrinsics;
  const int w = k_rs.width, h = k_rs.height;
  if (flow_fwd.width() != w || flow_fwd.height() != h)
    throw DimensionMismatch("flow dimensions do not match RS image");

  ReadoutClock clock = manifest.clock;
  clock.frame_start = entry.timestamp;
  const ScanlineLUT* lut = manifest.lut ? &*manifest.lut : nullptr;

  GroundTruthFrame gt;
  gt.rowposes = row_pose_tables(manifest.trajectory, entry.timestamp,
                                manifest.clock, h, lut);

  const Mask flow_ok =
      bidirectional_filter(flow_fwd, flow_bwd, manifest.flow_tol_px);

  gt.depth = DepthMap(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!flow_ok.at(x, y)) continue;
      const Vec2 u_rs(x, y);
      const Vec2 u_gs0 = u_rs + flow_fwd.at(x, y);
      const double srow = sensor_row(clock, lut, u_rs);
      const Pose rowpose = gt.rowposes.at_row(srow / clock.row_scale());
      const Pose gs0_from_rsrow =
          compose(manifest.gs0_from_rs_row0, rowpose);
      try {
        const TriangulationResult tri = triangulate(
            u_gs0, u_rs, gs0_from_rsrow, k_rs, manifest.gs0_intrinsics);
        gt.depth.values.at(x, y) = static_cast<float>(tri.depth);
        gt.depth.valid.at(x, y) = 1;
      } catch (const DegenerateRays&) {
      } catch (const NegativeDepth&) {
        // Correspondence rejected; pixel stays invalid.
      }
    }
  }

  RsFrame frame;
  frame.image = to_float(io::load_image_gray(entry.rs_image));
  if (!frame.image.same_size(w, h))
    throw DimensionMismatch("RS image dimensions do not match calibration");
  frame.depth = gt.depth;
  frame.clock = clock;
  frame.intrinsics = k_rs;
  if (lut) frame.lut = *lut;

  gt.gt_map = correction_map(frame, gt.rowposes);
  const RenderResult render = render_corrected(frame, gt.gt_map);
  const FillResult filled = fill_holes(render.image, render.filled, 3);
  gt.gs1_image = filled.image;
  gt.gs1_filled = filled.filled;

  long valid = 0;
  for (const auto v : gt.depth.valid.data) valid += v;
  gt.valid_fraction = static_cast<double>(valid) / (w * h);
  gt.flagged_low_valid = gt.valid_fraction < manifest.valid_fraction_threshold;
  return gt;
}

void save_rowposes(const RowPoseTable& table, const ReadoutClock& clock,
                   const std::string& path) {
  Trajectory traj;
  const double step = clock.row_scale() * clock.row_period;
  for (int r = 0; r < table.size(); ++r)
    traj.samples.push_back({clock.frame_start + r * step, table.rows[r]});
  save_trajectory_tum(traj, path);
}

RowPoseTable load_rowposes(const std::string& path) {
  const Trajectory traj = load_trajectory_tum(path);
  RowPoseTable table;
  table.rows.reserve(traj.size());
  for (const auto& s : traj.samples) table.rows.push_back(s.pose);
  return table;
}

ExportSummary export_dataset(const SequenceManifest& manifest,
                             const std::string& out_dir) {
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  const fs::path marker = out / "INCOMPLETE";

  ExportSummary summary;
  summary.frames_in = static_cast<int>(manifest.frames.size());

  std::ostringstream csv;
  csv << "frame_id,status,reason,valid_fraction\n";
  csv.precision(6);

  double valid_sum = 0.0;
  try {
    std::ofstream(marker.string()) << "export in progress\n";
    for (int i = 0; i < summary.frames_in; ++i) {
      const FrameEntry& entry = manifest.frames[i];
      GroundTruthFrame gt;
      try {
        const FlowField fwd = io::load_flo(entry.flow_fwd);
        const FlowField bwd = io::load_flo(entry.flow_bwd);
        gt = generate_frame(manifest, i, fwd, bwd);
      } catch (const QueryOutOfRange&) {
        ++summary.frames_dropped;
        summary.drop_reasons.push_back("no_pose_coverage");
        csv << entry.id << ",dropped,no_pose_coverage,0\n";
        continue;
      } catch (const InsufficientSamples&) {
        ++summary.frames_dropped;
        summary.drop_reasons.push_back("insufficient_trajectory");
        csv << entry.id << ",dropped,insufficient_trajectory,0\n";
        continue;
      }

      const fs::path dir = out / entry.id;
      fs::create_directories(dir);
      io::save_image_gray(io::load_image_gray(entry.rs_image),
                          (dir / "rs.png").string());
      io::save_image_gray(to_u8(gt.gs1_image), (dir / "gs1.png").string());
      io::save_depth_pfm(gt.depth, (dir / "depth.pfm").string());
      io::save_map_pfm(gt.gt_map, (dir / "gtmap.pfm").string());
      ReadoutClock clock = manifest.clock;
      clock.frame_start = entry.timestamp;
      save_rowposes(gt.rowposes, clock, (dir / "rowposes.txt").string());

      ++summary.frames_kept;
      valid_sum += gt.valid_fraction;
      csv << entry.id << ',' << (gt.flagged_low_valid ? "flagged" : "ok")
          << ",," << gt.valid_fraction << '\n';
    }
    std::ofstream summary_file((out / "summary.csv").string());
    if (!summary_file) throw IoError("cannot write summary.csv");
    summary_file << csv.str();
    summary_file << "# frames_in=" << summary.frames_in
                 << " kept=" << summary.frames_kept
                 << " dropped=" << summary.frames_dropped << '\n';
    summary_file.close();
    fs::remove(marker);
  } catch (...) {
    // Leave the INCOMPLETE marker behind.
    throw;
  }

  if (summary.frames_kept > 0)
    summary.mean_valid_fraction = valid_sum / summary.frames_kept;
  return summary;
}

}  // namespace rsgeo
