#pragma once

#include <vector>

#include "rsgeo/geometry.hpp"
#include "rsgeo/trajectory.hpp"

namespace rsgeo {

struct EpeReport {
  double mean_px = 0.0;
  double median_px = 0.0;
  long valid_count = 0;
  std::vector<EpeStats> per_frame;
};

struct RatioReport {
  int improved_count = 0;
  int total = 0;
  double ratio = 0.0;  // improved_count / total, in [0, 1]
};

struct Sim3 {
  double scale = 1.0;
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& x) const {
    return scale * (rotation * x) + translation;
  }
};

struct AteReport {
  double rmse_m = 0.0;
  Sim3 alignment;  // maps estimate positions onto ground truth
  int pair_count = 0;
};

// Aggregates per-frame EPE stats; mean is weighted by valid pixel count.
EpeReport aggregate_epe(const std::vector<EpeStats>& frames);

// Fraction of frames whose EPE strictly decreased (ties count as not
// improved). Throws LengthMismatch.
RatioReport improvement_ratio(const std::vector<double>& epe_in,
                              const std::vector<double>& epe_out);

// ATE with closed-form Sim(3) alignment (Umeyama) of estimated
// positions to ground truth; association by nearest timestamp within
// max_dt. Throws DegenerateGeometry for < 3 or collinear pairs.
AteReport ate_sim3(const Trajectory& est, const Trajectory& gt, double max_dt);

}  // namespace rsgeo
