#include "rsgeo/eval.hpp"

#include <algorithm>
#include <cmath>

#include "rsgeo/errors.hpp"

namespace rsgeo {

EpeReport aggregate_epe(const std::vector<EpeStats>& frames) {
  EpeReport r;
  r.per_frame = frames;
  double sum = 0.0;
  std::vector<double> means;
  for (const auto& f : frames) {
    sum += f.mean_px * f.valid_count;
    r.valid_count += f.valid_count;
    means.push_back(f.mean_px);
  }
  if (r.valid_count > 0) r.mean_px = sum / r.valid_count;
  if (!means.empty()) {
    std::sort(means.begin(), means.end());
    const size_t mid = means.size() / 2;
    r.median_px = means.size() % 2 ? means[mid]
                                   : 0.5 * (means[mid - 1] + means[mid]);
  }
  return r;
}

RatioReport improvement_ratio(const std::vector<double>& epe_in,
                              const std::vector<double>& epe_out) {
  if (epe_in.size() != epe_out.size())
    throw LengthMismatch("per-frame EPE lists differ in length");
  RatioReport r;
  r.total = static_cast<int>(epe_in.size());
  for (size_t i = 0; i < epe_in.size(); ++i)
    if (epe_out[i] < epe_in[i]) ++r.improved_count;  // strict: ties lose
  if (r.total > 0) r.ratio = static_cast<double>(r.improved_count) / r.total;
  return r;
}

AteReport ate_sim3(const Trajectory& est, const Trajectory& gt, double max_dt) {
  // Associate each ground-truth sample with the nearest estimate in time.
  std::vector<Vec3> x;  // estimate
  std::vector<Vec3> y;  // ground truth
  for (const auto& g : gt.samples) {
    double best = max_dt;
    const Pose* match = nullptr;
    for (const auto& e : est.samples) {
      const double dt = std::abs(e.timestamp - g.timestamp);
      if (dt <= best) {
        best = dt;
        match = &e.pose;
      }
    }
    if (match) {
      x.push_back(match->translation);
      y.push_back(g.pose.translation);
    }
  }
  const int n = static_cast<int>(x.size());
  if (n < 3) throw DegenerateGeometry("fewer than 3 associated pairs");

  Vec3 mx = Vec3::Zero(), my = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;

  Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
  double var_x = 0.0;
  for (int i = 0; i < n; ++i) {
    sigma += (y[i] - my) * (x[i] - mx).transpose();
    var_x += (x[i] - mx).squaredNorm();
  }
  sigma /= n;
  var_x /= n;

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 d = svd.singularValues();
  // Collinear point sets leave the rotation about the line free.
  if (d(1) <= 1e-12 * std::max(d(0), 1e-300) || var_x <= 0.0)
    throw DegenerateGeometry("associated positions are collinear");

  Vec3 s = Vec3::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0)
    s(2) = -1.0;
  const Eigen::Matrix3d rot =
      svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  const double scale = d.dot(s) / var_x;

  AteReport r;
  r.alignment.scale = scale;
  r.alignment.rotation = Quat(rot).normalized();
  r.alignment.translation = my - scale * (rot * mx);
  r.pair_count = n;

  double se = 0.0;
  for (int i = 0; i < n; ++i)
    se += (y[i] - r.alignment.apply(x[i])).squaredNorm();
  r.rmse_m = std::sqrt(se / n);
  return r;
}

}  // namespace rsgeo
