#include "rsgeo/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "rsgeo/errors.hpp"

namespace rsgeo {

CubicSpline::CubicSpline(std::span<const double> t, std::span<const double> y)
    : t_(t.begin(), t.end()), y_(y.begin(), y.end()) {
  const int n = static_cast<int>(t_.size());
  if (n < 4)
    throw InsufficientSamples("cubic spline needs >= 4 knots, got " +
                              std::to_string(n));
  for (int i = 1; i < n; ++i)
    if (t_[i] <= t_[i - 1])
      throw QueryOutOfRange("spline knots must be strictly increasing");

  // Tridiagonal system for second derivatives, natural end conditions.
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 1.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
  for (int i = 1; i < n - 1; ++i) {
    const double h0 = t_[i] - t_[i - 1];
    const double h1 = t_[i + 1] - t_[i];
    sub[i] = h0;
    diag[i] = 2.0 * (h0 + h1);
    sup[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  // Thomas algorithm; boundary rows are m_0 = m_{n-1} = 0.
  for (int i = 2; i < n - 1; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (int i = n - 2; i >= 1; --i)
    m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
}

namespace {
int find_interval(const std::vector<double>& t, double x) {
  if (x < t.front() || x > t.back())
    throw QueryOutOfRange("spline query " + std::to_string(x) +
                          " outside [" + std::to_string(t.front()) + ", " +
                          std::to_string(t.back()) + "]");
  auto it = std::upper_bound(t.begin(), t.end(), x);
  int i = static_cast<int>(it - t.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(t.size()) - 2);
}
}  // namespace

double CubicSpline::eval(double x) const {
  const int i = find_interval(t_, x);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - x) / h;
  const double b = (x - t_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  const int i = find_interval(t_, x);
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - x) / h;
  const double b = (x - t_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h /
             6.0;
}

std::vector<Pose> interpolate_trajectory(const Trajectory& traj,
                                         std::span<const double> query_times) {
  const int n = traj.size();
  if (n < 4)
    throw InsufficientSamples("trajectory interpolation needs >= 4 samples");

  std::vector<double> t(n);
  std::array<std::vector<double>, 3> tr;
  std::array<std::vector<double>, 4> qc;  // x, y, z, w
  for (auto& v : tr) v.resize(n);
  for (auto& v : qc) v.resize(n);

  Quat prev = traj.samples[0].pose.rotation.normalized();
  for (int i = 0; i < n; ++i) {
    t[i] = traj.samples[i].timestamp;
    const Pose& p = traj.samples[i].pose;
    for (int c = 0; c < 3; ++c) tr[c][i] = p.translation[c];
    Quat q = p.rotation.normalized();
    // Hemisphere continuity along the trajectory.
    if (q.dot(prev) < 0.0) q.coeffs() = -q.coeffs();
    prev = q;
    qc[0][i] = q.x();
    qc[1][i] = q.y();
    qc[2][i] = q.z();
    qc[3][i] = q.w();
  }

  std::array<std::unique_ptr<CubicSpline>, 3> str;
  std::array<std::unique_ptr<CubicSpline>, 4> sq;
  for (int c = 0; c < 3; ++c) str[c] = std::make_unique<CubicSpline>(t, tr[c]);
  for (int c = 0; c < 4; ++c) sq[c] = std::make_unique<CubicSpline>(t, qc[c]);

  std::vector<Pose> out;
  out.reserve(query_times.size());
  for (double tq : query_times) {
    Pose p;
    for (int c = 0; c < 3; ++c) p.translation[c] = str[c]->eval(tq);
    Quat q(sq[3]->eval(tq), sq[0]->eval(tq), sq[1]->eval(tq), sq[2]->eval(tq));
    p.rotation = q.normalized();
    out.push_back(p.canonical());
  }
  return out;
}

Trajectory load_trajectory_tum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory file: " + path);
  Trajectory traj;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    std::istringstream ss(line);
    double ts, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> ts >> tx >> ty >> tz >> qx >> qy >> qz >> qw)) continue;
    Pose p;
    p.translation = {tx, ty, tz};
    p.rotation = Quat(qw, qx, qy, qz).normalized();
    if (!traj.samples.empty() && ts <= traj.samples.back().timestamp)
      throw IoError("non-increasing timestamps in " + path);
    traj.samples.push_back({ts, p});
  }
  if (traj.samples.empty()) throw IoError("no trajectory samples in " + path);
  return traj;
}

void save_trajectory_tum(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trajectory file: " + path);
  out.precision(17);
  for (const auto& s : traj.samples) {
    const Pose p = s.pose.canonical();
    out << s.timestamp << ' ' << p.translation.x() << ' ' << p.translation.y()
        << ' ' << p.translation.z() << ' ' << p.rotation.x() << ' '
        << p.rotation.y() << ' ' << p.rotation.z() << ' ' << p.rotation.w()
        << '\n';
  }
}

}  // namespace rsgeo
