#include "roadtrack/geometry/curve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "roadtrack/core/error.hpp"

namespace roadtrack::geometry {

CurveOffset fit_curve_offset(std::span<const RoadPoint> lane_line) {
  if (lane_line.size() < 3) {
    fail(ErrorKind::kTooFewPoints, "curve fit needs >= 3 points");
  }
  std::set<double> distinct;
  double scale = 0.0;
  for (const auto& p : lane_line) {
    distinct.insert(p.x);
    scale = std::max(scale, std::abs(p.x));
  }
  if (distinct.size() < 3) fail(ErrorKind::kDegenerateX, "fewer than 3 distinct x values");

  // Column scaling keeps the Vandermonde system well conditioned for x ~ 1e3.
  const Eigen::Index n = static_cast<Eigen::Index>(lane_line.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = lane_line[i].x / scale;
    a(i, 0) = 1.0;
    a(i, 1) = t;
    a(i, 2) = t * t;
    b[i] = lane_line[i].y;
  }
  const Eigen::Vector3d k = a.colPivHouseholderQr().solve(b);
  return {k[2] / (scale * scale), k[1] / scale, k[0]};
}

RoadPoint apply_curvature(const CurveOffset& c, const RoadPoint& p, bool inverse) {
  RoadPoint out = p;
  out.y = inverse ? p.y + c(p.x) : p.y - c(p.x);
  return out;
}

}  // namespace roadtrack::geometry
