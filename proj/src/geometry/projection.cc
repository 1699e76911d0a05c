#include "roadtrack/geometry/projection.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "roadtrack/core/error.hpp"
#include "roadtrack/kernels/kernels.hpp"

namespace roadtrack::geometry {

namespace {

constexpr double kLogLo = -6.0;
constexpr double kLogHi = 6.0;
constexpr int kGrid = 400;
constexpr double kRelTol = 1e-10;

CameraProjection assemble(const Homography& h_inv, const ImagePoint& vp, double p33) {
  CameraProjection proj;
  proj.p.col(0) = h_inv.m.col(0);
  proj.p.col(1) = h_inv.m.col(1);
  proj.p.col(2) = p33 * Eigen::Vector3d(vp.u, vp.v, 1.0);
  proj.p.col(3) = h_inv.m.col(2);
  return proj;
}

double in_front_margin(const CameraProjection& proj, const RoadPoint& p, double w) {
  const double scale = std::abs(proj.p(2, 0) * p.x) + std::abs(proj.p(2, 1) * p.y) +
                       std::abs(proj.p(2, 2) * p.z) + std::abs(proj.p(2, 3));
  return proj.front_sign * w - 1e-12 * scale;
}

}  // namespace

ImagePoint intersect_vertical_lines(std::span<const LineSegment> lines) {
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (const auto& l : lines) {
    Eigen::Vector2d d(l.b.u - l.a.u, l.b.v - l.a.v);
    const double len = d.norm();
    if (!(len > 0.0)) fail(ErrorKind::kDegenerateConfiguration, "zero-length line segment");
    const Eigen::Vector2d n(-d.y() / len, d.x() / len);
    const double c = n.dot(Eigen::Vector2d(l.a.u, l.a.v));
    a += n * n.transpose();
    b += n * c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(a);
  const auto ev = eig.eigenvalues();
  if (lines.size() < 2 || !(ev[0] > 1e-12 * ev[1])) {
    fail(ErrorKind::kParallelLines, "vertical lines do not intersect");
  }
  const Eigen::Vector2d x = a.ldlt().solve(b);
  return {x.x(), x.y()};
}

double projection_mse(const CameraProjection& proj, std::span<const HeightSample> samples) {
  double sum = 0.0;
  for (const auto& s : samples) {
    const Eigen::Vector3d q = proj.p * Eigen::Vector4d(s.road.x, s.road.y, s.road.z, 1.0);
    const double du = q.x() / q.z() - s.image.u;
    const double dv = q.y() / q.z() - s.image.v;
    sum += du * du + dv * dv;
  }
  return samples.empty() ? 0.0 : sum / static_cast<double>(samples.size());
}

CameraProjection fit_projection(const Homography& h_inv, const ImagePoint& vp_z,
                                std::span<const HeightSample> samples) {
  if (!std::isfinite(vp_z.u) || !std::isfinite(vp_z.v)) {
    fail(ErrorKind::kValidationError, "vanishing point is not finite");
  }
  std::vector<HeightSample> above;
  for (const auto& s : samples) {
    if (s.road.z > 0.0) above.push_back(s);
  }
  if (above.empty()) fail(ErrorKind::kNoAbovePlaneSamples, "no sample above the road plane");

  // The bracket is meant for P scaled to p34 = 1; h_inv may carry any scale.
  const double h33 = h_inv.m(2, 2);
  const double unit = std::abs(h33) > 1e-12 * h_inv.m.norm() ? std::abs(h33) : h_inv.m.norm();
  auto objective = [&](double sign, double log_mag) {
    const double e = projection_mse(assemble(h_inv, vp_z, unit * sign * std::pow(10.0, log_mag)), above);
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
  };

  double best_sign = 1.0;
  int best_i = 0;
  double best_e = std::numeric_limits<double>::infinity();
  const double step = (kLogHi - kLogLo) / kGrid;
  for (double sign : {1.0, -1.0}) {
    for (int i = 0; i <= kGrid; ++i) {
      const double e = objective(sign, kLogLo + step * i);
      if (e < best_e) {
        best_e = e;
        best_sign = sign;
        best_i = i;
      }
    }
  }

  // Golden section between the grid neighbours of the best cell.
  double lo = kLogLo + step * std::max(0, best_i - 1);
  double hi = kLogLo + step * std::min(kGrid, best_i + 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = objective(best_sign, c);
  double fd = objective(best_sign, d);
  // Relative tolerance on |p33| is a fixed width in log10 space.
  const double tol = kRelTol / std::log(10.0);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = objective(best_sign, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = objective(best_sign, d);
    }
  }
  double log_best = 0.5 * (lo + hi);
  if (objective(best_sign, log_best) > best_e) log_best = kLogLo + step * best_i;

  CameraProjection proj = assemble(h_inv, vp_z, unit * best_sign * std::pow(10.0, log_best));
  double w_sum = 0.0;
  for (const auto& s : above) {
    w_sum += h_inv.m(2, 0) * s.road.x + h_inv.m(2, 1) * s.road.y + h_inv.m(2, 2);
  }
  proj.front_sign = w_sum < 0.0 ? -1.0 : 1.0;
  return proj;
}

ImagePoint project_point(const CameraProjection& proj, const RoadPoint& p) {
  double u = 0.0, v = 0.0, w = 0.0;
  const Eigen::Matrix<double, 3, 4, Eigen::RowMajor> rm = proj.p;
  kernels::PointArrays pts{&p.x, &p.y, &p.z, 1};
  kernels::project_points(rm.data(), pts, &u, &v, &w);
  if (!(in_front_margin(proj, p, w) > 0.0)) {
    fail(ErrorKind::kAtInfinity, "point is on or behind the camera plane");
  }
  return {u, v};
}

std::array<ImagePoint, 8> road_to_image(const CameraProjection& proj, const Box3D& box) {
  const auto corners = box_corners(box);
  std::array<double, 8> x, y, z, u, v, w;
  for (int i = 0; i < 8; ++i) {
    x[i] = corners[i].x;
    y[i] = corners[i].y;
    z[i] = corners[i].z;
  }
  const Eigen::Matrix<double, 3, 4, Eigen::RowMajor> rm = proj.p;
  kernels::project_points(rm.data(), {x.data(), y.data(), z.data(), 8}, u.data(), v.data(),
                          w.data());
  std::array<ImagePoint, 8> out;
  for (int i = 0; i < 8; ++i) {
    if (!(in_front_margin(proj, corners[i], w[i]) > 0.0)) {
      fail(ErrorKind::kAtInfinity, "box corner " + std::to_string(i) + " is behind the camera");
    }
    out[i] = {u[i], v[i]};
  }
  return out;
}

}  // namespace roadtrack::geometry
