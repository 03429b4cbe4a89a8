// rsgeo: rolling-shutter geometry toolkit CLI.
//
// Subcommands: synthesize | correct | gen-gt | evaluate-epe |
// evaluate-ate | imu-rowposes. Each wraps one library pipeline and
// writes artifacts plus an optional CSV report. Exit codes: 0 success,
// 1 runtime/data error, 2 usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "rsgeo/dataset.hpp"
#include "rsgeo/errors.hpp"
#include "rsgeo/eval.hpp"
#include "rsgeo/geometry.hpp"
#include "rsgeo/imu.hpp"
#include "rsgeo/io.hpp"
#include "rsgeo/synthetic.hpp"

namespace fs = std::filesystem;
using namespace rsgeo;

namespace {

// All numeric report fields use 6 significant digits.
std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void write_report(const std::string& path, const std::string& header,
                  const std::vector<std::string>& rows) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path);
  out << header << "\n";
  for (const auto& r : rows) out << r << "\n";
}

RsFrame load_frame(const std::string& config_path, const std::string& image,
                   const std::string& depth, const std::string& lut) {
  const io::Config cfg = io::load_config(config_path);
  RsFrame frame;
  frame.intrinsics = io::intrinsics_from_config(cfg);
  frame.clock = io::clock_from_config(cfg);
  frame.image = to_float(io::load_image_gray(image));
  frame.depth = io::load_depth_pfm(depth);
  if (!lut.empty()) frame.lut = io::load_lut_pfm(lut);
  if (!frame.depth.values.same_size(frame.image.width, frame.image.height))
    throw DimensionMismatch("image and depth sizes disagree");
  return frame;
}

int cmd_synthesize(const std::string& config, const std::string& image,
                   const std::string& depth, const std::string& rowposes,
                   const std::string& lut, const std::string& out_dir) {
  const RsFrame gs = load_frame(config, image, depth, lut);
  const RowPoseTable table = load_rowposes(rowposes);
  const ScanlineLUT effective_lut =
      gs.lut.table.data.empty()
          ? build_identity_lut(gs.image.height, gs.image.width,
                               gs.clock.sensor_rows)
          : gs.lut;
  const SynthesisResult s = synthesize_rs(gs.image, gs.depth, table,
                                          gs.intrinsics, gs.clock,
                                          effective_lut);
  fs::create_directories(out_dir);
  io::save_image_gray(to_u8(s.frame.image), (fs::path(out_dir) / "rs.png").string());
  io::save_depth_pfm(s.frame.depth, (fs::path(out_dir) / "depth.pfm").string());
  io::save_map_pfm(s.gt_map, (fs::path(out_dir) / "gtmap.pfm").string());
  std::cout << "synthesize: wrote rs.png, depth.pfm, gtmap.pfm to "
            << out_dir << "\n";
  return 0;
}

int cmd_correct(const std::string& config, const std::string& image,
                const std::string& depth, const std::string& rowposes,
                const std::string& lut, const std::string& out_dir,
                int fill_radius, const std::string& report) {
  const RsFrame frame = load_frame(config, image, depth, lut);
  const RowPoseTable table = load_rowposes(rowposes);
  const CoordinateMap map = correction_map(frame, table);
  const RenderResult rendered = render_corrected(frame, map);
  const FillResult filled =
      fill_holes(rendered.image, rendered.filled, fill_radius);

  fs::create_directories(out_dir);
  io::save_image_gray(to_u8(filled.image),
                      (fs::path(out_dir) / "gs1.png").string());
  io::save_map_pfm(map, (fs::path(out_dir) / "map.pfm").string());

  long holes = 0;
  for (auto m : filled.filled.data) holes += m ? 0 : 1;
  const double total = double(map.width()) * map.height();
  long valid = 0;
  for (auto m : map.valid.data) valid += m;
  write_report(report, "valid_fraction,unfilled_fraction",
               {num(valid / total) + "," + num(holes / total)});
  std::cout << "correct: wrote gs1.png, map.pfm to " << out_dir << "\n";
  return 0;
}

int cmd_gen_gt(const std::string& manifest_path, const std::string& out_dir,
               const std::string& report) {
  const SequenceManifest manifest = load_manifest(manifest_path);
  const ExportSummary s = export_dataset(manifest, out_dir);
  write_report(report,
               "frames_in,frames_kept,frames_dropped,mean_valid_fraction",
               {std::to_string(s.frames_in) + "," +
                std::to_string(s.frames_kept) + "," +
                std::to_string(s.frames_dropped) + "," +
                num(s.mean_valid_fraction)});
  std::cout << "gen-gt: kept " << s.frames_kept << "/" << s.frames_in
            << " frames, mean valid fraction "
            << num(s.mean_valid_fraction) << "\n";
  for (const auto& r : s.drop_reasons) std::cout << "  dropped: " << r << "\n";
  return 0;
}

int cmd_evaluate_epe(const std::vector<std::string>& pred,
                     const std::vector<std::string>& gt,
                     const std::vector<std::string>& baseline,
                     const std::string& report) {
  if (pred.size() != gt.size())
    throw LengthMismatch("need one --gt per --pred");
  if (!baseline.empty() && baseline.size() != pred.size())
    throw LengthMismatch("need one --baseline per --pred");

  std::vector<EpeStats> stats;
  std::vector<double> epe_pred, epe_base;
  std::vector<std::string> rows;
  for (size_t i = 0; i < pred.size(); ++i) {
    const CoordinateMap p = io::load_map_pfm(pred[i]);
    const CoordinateMap g = io::load_map_pfm(gt[i]);
    const EpeStats e = epe(p, g);
    stats.push_back(e);
    epe_pred.push_back(e.mean_px);
    std::string row = pred[i] + "," + num(e.mean_px) + "," +
                      num(e.median_px) + "," + num(e.max_px) + "," +
                      std::to_string(e.valid_count);
    if (!baseline.empty()) {
      const EpeStats b = epe(io::load_map_pfm(baseline[i]), g);
      epe_base.push_back(b.mean_px);
      row += "," + num(b.mean_px);
    }
    rows.push_back(row);
  }
  const EpeReport agg = aggregate_epe(stats);
  std::cout << "epe_mean_px " << num(agg.mean_px) << "\n"
            << "epe_median_px " << num(agg.median_px) << "\n"
            << "valid_count " << agg.valid_count << "\n";
  std::string header = "map,mean_px,median_px,max_px,valid_count";
  if (!baseline.empty()) {
    header += ",baseline_mean_px";
    const RatioReport r = improvement_ratio(epe_base, epe_pred);
    std::cout << "improvement_ratio " << num(r.ratio) << " ("
              << r.improved_count << "/" << r.total << ")\n";
  }
  write_report(report, header, rows);
  return 0;
}

int cmd_evaluate_ate(const std::vector<std::string>& est_paths,
                     const std::string& gt_path, double max_dt,
                     const std::string& report) {
  const Trajectory gt = load_trajectory_tum(gt_path);
  std::vector<std::string> rows;
  double sum = 0.0;
  for (const auto& path : est_paths) {
    const AteReport r = ate_sim3(load_trajectory_tum(path), gt, max_dt);
    sum += r.rmse_m;
    rows.push_back(path + "," + num(r.rmse_m) + "," +
                   num(r.alignment.scale) + "," +
                   std::to_string(r.pair_count));
    std::cout << path << " rmse_m " << num(r.rmse_m) << " scale "
              << num(r.alignment.scale) << " pairs " << r.pair_count << "\n";
  }
  std::cout << "ate_mean_rmse_m " << num(sum / est_paths.size()) << "\n";
  write_report(report, "est,rmse_m,scale,pair_count", rows);
  return 0;
}

int cmd_imu_rowposes(const std::string& config, const std::string& imu_path,
                     double frame_start, int substeps,
                     const std::vector<double>& bias,
                     const std::string& out_path) {
  const io::Config cfg = io::load_config(config);
  ReadoutClock clock = io::clock_from_config(cfg);
  clock.frame_start = frame_start;
  ImuSeries imu = load_imu_csv(imu_path);
  if (io::config_has(cfg, "imu_qw")) {
    ImuExtrinsics ext;
    ext.cam_from_imu =
        Quat(io::config_num(cfg, "imu_qw"), io::config_num(cfg, "imu_qx"),
             io::config_num(cfg, "imu_qy"), io::config_num(cfg, "imu_qz"))
            .normalized();
    imu = rotate_to_camera(imu, ext);
  }
  Vec3 gyro_bias = Vec3::Zero();
  if (!bias.empty()) gyro_bias = Vec3(bias[0], bias[1], bias[2]);
  const RowPoseTable table = gyro_integrate_rowposes(
      imu, clock, clock.image_rows, substeps, gyro_bias);
  save_rowposes(table, clock, out_path);
  std::cout << "imu-rowposes: wrote " << table.size() << " rows to "
            << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rolling-shutter geometry toolkit"};
  app.require_subcommand(1);

  std::string config, image, depth, rowposes, lut, out_dir, report;
  std::string manifest_path, gt_path, imu_path, out_path;
  std::vector<std::string> pred, gt_maps, baseline, est_paths;
  std::vector<double> bias;
  int fill_radius = 3, substeps = 1;
  double max_dt = 0.025;  // half of a 20 Hz frame period
  double frame_start = 0.0;

  auto* synth = app.add_subcommand(
      "synthesize", "render an RS frame from a GS image, depth and row poses");
  synth->add_option("--config", config, "calibration config")->required();
  synth->add_option("--image", image, "GS grayscale image (png/pgm)")->required();
  synth->add_option("--depth", depth, "GS depth map (.pfm)")->required();
  synth->add_option("--rowposes", rowposes, "row-pose table")->required();
  synth->add_option("--lut", lut, "scanline LUT (.pfm)");
  synth->add_option("--out", out_dir, "output directory")->required();

  auto* correct = app.add_subcommand(
      "correct", "undo RS distortion given depth and row poses");
  correct->add_option("--config", config, "calibration config")->required();
  correct->add_option("--image", image, "RS grayscale image")->required();
  correct->add_option("--depth", depth, "RS depth map (.pfm)")->required();
  correct->add_option("--rowposes", rowposes, "row-pose table")->required();
  correct->add_option("--lut", lut, "scanline LUT (.pfm)");
  correct->add_option("--out", out_dir, "output directory")->required();
  correct->add_option("--fill-radius", fill_radius, "hole-fill radius, px");
  correct->add_option("--report", report, "CSV report path");

  auto* gen = app.add_subcommand(
      "gen-gt", "run the ground-truth pipeline over a sequence manifest");
  gen->add_option("--config", manifest_path, "sequence manifest")->required();
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_option("--report", report, "CSV report path");

  auto* eepe = app.add_subcommand(
      "evaluate-epe", "end-point error between coordinate maps");
  eepe->add_option("--pred", pred, "predicted map (.pfm), repeatable")
      ->required();
  eepe->add_option("--gt", gt_maps, "ground-truth map (.pfm), repeatable")
      ->required();
  eepe->add_option("--baseline", baseline,
                   "baseline maps for the improvement ratio");
  eepe->add_option("--report", report, "CSV report path");

  auto* eate = app.add_subcommand(
      "evaluate-ate", "Sim(3)-aligned trajectory RMSE");
  eate->add_option("--est", est_paths, "estimated trajectory, repeatable")
      ->required();
  eate->add_option("--gt", gt_path, "ground-truth trajectory")->required();
  eate->add_option("--max-dt", max_dt, "association tolerance, seconds");
  eate->add_option("--report", report, "CSV report path");

  auto* imu = app.add_subcommand(
      "imu-rowposes", "rotation-only row poses from gyro integration");
  imu->add_option("--config", config, "calibration config")->required();
  imu->add_option("--imu", imu_path, "IMU CSV")->required();
  imu->add_option("--frame-start", frame_start, "row-0 capture time, seconds")
      ->required();
  imu->add_option("--substeps", substeps, "integration substeps per row");
  imu->add_option("--bias", bias, "gyro bias wx wy wz")->expected(3);
  imu->add_option("--out", out_path, "output row-pose file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth) return cmd_synthesize(config, image, depth, rowposes, lut, out_dir);
    if (*correct)
      return cmd_correct(config, image, depth, rowposes, lut, out_dir,
                         fill_radius, report);
    if (*gen) return cmd_gen_gt(manifest_path, out_dir, report);
    if (*eepe) return cmd_evaluate_epe(pred, gt_maps, baseline, report);
    if (*eate) return cmd_evaluate_ate(est_paths, gt_path, max_dt, report);
    if (*imu)
      return cmd_imu_rowposes(config, imu_path, frame_start, substeps, bias,
                              out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
