#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "roadtrack/core/error.hpp"
#include "roadtrack/core/rng.hpp"
#include "roadtrack/core/types.hpp"
#include "roadtrack/geometry/homography.hpp"
#include "roadtrack/geometry/projection.hpp"

namespace roadtrack::testing {

/// Kind of the roadtrack::Error thrown by `fn`, or nullopt when none is thrown.
template <typename Fn>
std::optional<ErrorKind> error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

#define EXPECT_ERROR(stmt, kind_) EXPECT_EQ(::roadtrack::testing::error_kind([&] { (void)(stmt); }), std::optional<::roadtrack::ErrorKind>(kind_))

/// Pinhole camera on a roadside pole looking down at the road: world (x, y, z)
/// to pixel. Pole position, height and aim are drawn from `rng`.
inline Eigen::Matrix<double, 3, 4> random_pole_camera(Rng& rng) {
  const double xc = rng.uniform(0.0, 2000.0);
  const Eigen::Vector3d c(xc + rng.uniform(-100.0, 100.0), -rng.uniform(60.0, 90.0), rng.uniform(80.0, 130.0));
  const Eigen::Vector3d target(xc, rng.uniform(-20.0, 20.0), 0.0);
  const Eigen::Vector3d fwd = (target - c).normalized();
  const Eigen::Vector3d right = fwd.cross(Eigen::Vector3d::UnitZ()).normalized();
  const Eigen::Vector3d down = fwd.cross(right);
  Eigen::Matrix3d r;
  r.row(0) = right.transpose();
  r.row(1) = down.transpose();
  r.row(2) = fwd.transpose();
  const double f = rng.uniform(1500.0, 3500.0);
  Eigen::Matrix3d k;
  k << f, 0, 1920, 0, f, 1080, 0, 0, 1;
  Eigen::Matrix<double, 3, 4> rt;
  rt.leftCols<3>() = r;
  rt.col(3) = -r * c;
  return k * rt;
}

inline Eigen::Vector3d apply(const Eigen::Matrix<double, 3, 4>& p, const RoadPoint& q) {
  return p * Eigen::Vector4d(q.x, q.y, q.z, 1.0);
}

inline ImagePoint pixel(const Eigen::Matrix<double, 3, 4>& p, const RoadPoint& q) {
  const Eigen::Vector3d h = apply(p, q);
  return {h.x() / h.z(), h.y() / h.z()};
}

/// Road-to-image homography embedded in P (columns 1, 2 and 4).
inline Eigen::Matrix3d road_to_image(const Eigen::Matrix<double, 3, 4>& p) {
  Eigen::Matrix3d h;
  h.col(0) = p.col(0);
  h.col(1) = p.col(1);
  h.col(2) = p.col(3);
  return h;
}

/// Lane-tick ends seen by the camera: both ends of 10 ft dashes every 40 ft
/// on the lane lines of one side, around the aim point.
inline std::vector<geometry::Correspondence> lane_ticks(const Eigen::Matrix<double, 3, 4>& p, double x_center,
                                                        double sign, int dashes = 3) {
  std::vector<geometry::Correspondence> out;
  for (int lane = 1; lane <= 3; ++lane) {
    for (int k = 0; k < dashes; ++k) {
      const double x0 = std::floor(x_center / 40.0) * 40.0 + 40.0 * (k - dashes / 2);
      for (double x : {x0, x0 + 10.0}) {
        const RoadPoint q{x, sign * 12.0 * lane, 0.0};
        out.push_back({pixel(p, q), q});
      }
    }
  }
  return out;
}

/// x where the camera's optical axis meets the road.
inline double aim_x(const Eigen::Matrix<double, 3, 4>& p) {
  const Eigen::Matrix3d h = road_to_image(p);
  const Eigen::Vector3d r = h.inverse() * Eigen::Vector3d(1920.0, 1080.0, 1.0);
  return r.x() / r.z();
}

}  // namespace roadtrack::testing
