// Hot-path benchmarks at the working resolution (320x256): correction
// map, RS synthesis, splat + hole fill, and gyro row-pose integration.

#include <benchmark/benchmark.h>

#include "rsgeo/geometry.hpp"
#include "rsgeo/imu.hpp"
#include "rsgeo/synthetic.hpp"

namespace {

using namespace rsgeo;

constexpr int kW = 320, kH = 256;

ReadoutClock bench_clock() {
  ReadoutClock c;
  c.row_period = 29.4737e-6;
  c.sensor_rows = 1024;
  c.image_rows = kH;
  return c;
}

Intrinsics bench_k() {
  Intrinsics k;
  k.fx = k.fy = 460.0;
  k.cx = kW / 2.0;
  k.cy = kH / 2.0;
  k.width = kW;
  k.height = kH;
  return k;
}

RsFrame bench_frame() {
  RsFrame f;
  f.image = synthetic::make_texture(kW, kH, 1);
  f.depth = synthetic::make_smooth_depth(kW, kH, 1.5, 6.0, 2);
  f.clock = bench_clock();
  f.intrinsics = bench_k();
  return f;
}

void bm_correction_map(benchmark::State& state) {
  const RsFrame frame = bench_frame();
  const RowPoseTable table =
      synthetic::make_smooth_rowposes(kH, frame.clock, 1.0, 0.5, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(correction_map(frame, table));
}
BENCHMARK(bm_correction_map)->Unit(benchmark::kMillisecond);

void bm_synthesize_rs(benchmark::State& state) {
  const RsFrame gs = bench_frame();
  const RowPoseTable table =
      synthetic::make_smooth_rowposes(kH, gs.clock, 1.0, 0.5, 3);
  const ScanlineLUT lut = build_identity_lut(kH, kW, gs.clock.sensor_rows);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        synthesize_rs(gs.image, gs.depth, table, gs.intrinsics, gs.clock, lut));
}
BENCHMARK(bm_synthesize_rs)->Unit(benchmark::kMillisecond);

void bm_splat_and_fill(benchmark::State& state) {
  const RsFrame frame = bench_frame();
  const RowPoseTable table =
      synthetic::make_smooth_rowposes(kH, frame.clock, 1.0, 0.5, 3);
  const CoordinateMap map = correction_map(frame, table);
  for (auto _ : state) {
    const RenderResult r = render_corrected(frame, map);
    benchmark::DoNotOptimize(fill_holes(r.image, r.filled, 3));
  }
}
BENCHMARK(bm_splat_and_fill)->Unit(benchmark::kMillisecond);

void bm_gyro_rowposes(benchmark::State& state) {
  const ReadoutClock clock = bench_clock();
  ImuSeries imu;
  for (double t = -0.01; t <= 0.05; t += 0.005)
    imu.samples.push_back({t, {0.5, -0.2, 0.8}, Vec3::Zero()});
  for (auto _ : state)
    benchmark::DoNotOptimize(
        gyro_integrate_rowposes(imu, clock, kH, state.range(0)));
}
BENCHMARK(bm_gyro_rowposes)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
