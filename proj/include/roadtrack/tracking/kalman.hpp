#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "roadtrack/core/types.hpp"

namespace roadtrack::tracking {

struct Detection {
  Box3D box;
  double confidence = 1.0;
  std::string camera;
  double t = 0.0;  // corrected capture time
};

struct KalmanConfig {
  // Process noise per second on (x, y, vx, vy): ft^2, ft^2, ft^2/s^2, ft^2/s^2.
  std::array<double, 4> q = {0.5, 0.1, 2.0, 0.5};
  // Measurement noise on (x, y), ft^2.
  std::array<double, 2> r = {1.0, 0.25};
  // Prior velocity spread for a new track, ft/s.
  double init_sigma_vx = 100.0;
  double init_sigma_vy = 5.0;
};

/// Constant-velocity state on (x, y, vx, vy).
struct TrackState {
  std::int64_t id = 0;
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
  Direction direction = Direction::kEB;
  double l = 1.0, w = 1.0, h = 1.0;  // running mean of matched detections
  int dims_n = 0;
  int age = 0;     // steps since creation
  int hits = 0;
  int misses = 0;  // consecutive
  std::array<int, kNumClasses> class_votes{};
  VehicleClass last_class = VehicleClass::kSedan;
  Eigen::Vector2d innovation = Eigen::Vector2d::Zero();

  /// Majority vote, ties to the latest detection's class.
  VehicleClass vehicle_class() const;
  Box3D box() const;
};

TrackState make_track(const Detection& det, std::int64_t id, const KalmanConfig& cfg = {});

/// x += vx dt, y += vy dt; P = F P F^T + Q dt.
TrackState kalman_predict(const TrackState& s, double dt, const KalmanConfig& cfg = {});

/// Linear update on (x, y) in Joseph form. Also folds the detection's dims
/// and class into the running estimates. Throws DirectionMismatch.
TrackState kalman_update(const TrackState& s, const Detection& z, const KalmanConfig& cfg = {});

}  // namespace roadtrack::tracking
