#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "roadtrack/core/types.hpp"
#include "roadtrack/simulator/config.hpp"

namespace roadtrack::simulator {

inline constexpr double kImageWidth = 3840.0;
inline constexpr double kImageHeight = 2160.0;

/// Lateral position of the real (bent) road: Y = y + k (x - L/2)^2 / 2.
double world_y(const SceneConfig& cfg, double x, double y);

/// A pole-mounted pinhole camera looking at its stretch of road.
struct SimCamera {
  std::string id;
  int index = 0;
  int pole = 0;
  double fov_x0 = 0.0, fov_x1 = 0.0;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // world position
  Eigen::Matrix<double, 3, 4> p = Eigen::Matrix<double, 3, 4>::Zero();  // world -> pixel
  double phase = 0.0;         // s, capture instant within the first frame period
  double clock_offset = 0.0;  // s, raw = true - offset (- residual), then quantized

  /// Road point (straight road coordinates) to pixel through the bent world.
  /// nullopt when the point is behind the camera.
  std::optional<ImagePoint> project(const SceneConfig& cfg, const RoadPoint& p) const;
  bool sees(double x) const { return x >= fov_x0 && x <= fov_x1; }
};

/// Three poles at L/6, L/2 and 5L/6 on the westbound side; each camera hangs
/// on the pole nearest its field-of-view center. Phase and clock offset are
/// drawn from the seed; the first camera is the time reference (offset 0).
std::vector<SimCamera> make_cameras(const SceneConfig& cfg);

std::string camera_name(int index);  // "c01", "c02", ...

}  // namespace roadtrack::simulator
