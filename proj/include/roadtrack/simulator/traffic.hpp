#pragma once

#include <memory>
#include <vector>

#include "roadtrack/core/types.hpp"
#include "roadtrack/simulator/config.hpp"

namespace roadtrack::simulator {

/// Constant-jerk piece: s(t) = s0 + v0 dt + a0 dt^2 / 2 + j dt^3 / 6.
struct JerkSegment {
  double t0 = 0.0;
  double s0 = 0.0, v0 = 0.0, a0 = 0.0, jerk = 0.0;
};

/// Distance travelled along the lane as a function of time; piecewise cubic
/// and C2. Before the first segment the first segment is extended.
class MotionProfile {
 public:
  MotionProfile() = default;
  explicit MotionProfile(std::vector<JerkSegment> segments);

  double position(double t) const;
  double speed(double t) const;
  double acceleration(double t) const;
  const std::vector<JerkSegment>& segments() const { return segments_; }

 private:
  const JerkSegment& segment(double t) const;
  std::vector<JerkSegment> segments_;
};

/// One vehicle follows its lane profile delayed by `delay` and shifted back
/// by `spacing` (Newell car following).
struct VehicleTruth {
  ObjectId id = 0;
  VehicleClass cls = VehicleClass::kSedan;
  Direction direction = Direction::kEB;
  int lane = 1;
  double y = 0.0;
  double l = 0.0, w = 0.0, h = 0.0;
  double delay = 0.0;    // s
  double spacing = 0.0;  // ft
  std::shared_ptr<const MotionProfile> profile;

  /// Rear position measured along the direction of travel from the entry end.
  double travelled(double t) const { return profile->position(t - delay) - spacing; }
  double speed(double t) const { return profile->speed(t - delay); }
  Box3D box(double t, double roadway_length) const;
};

struct SceneTruth {
  SceneConfig config;
  std::vector<VehicleTruth> vehicles;

  /// Vehicles whose footprint intersects [x0, x1] at time t.
  std::vector<const VehicleTruth*> visible(double t, double x0, double x1) const;
};

/// Deterministic per seed. Throws InfeasibleDensity when the requested
/// vehicles cannot all enter the roadway within the duration.
SceneTruth generate_scene(const SceneConfig& config);

/// Nominal class dimensions (l, w, h) in feet.
std::array<double, 3> class_dimensions(VehicleClass c);

}  // namespace roadtrack::simulator
