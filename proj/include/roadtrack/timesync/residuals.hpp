#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roadtrack/core/types.hpp"
#include "roadtrack/timesync/spline.hpp"

namespace roadtrack::timesync {

/// One frame's reported time split into its parts:
/// t_corrected = t_raw + offset + residual.
struct FrameStamp {
  std::string camera;
  std::int64_t frame_index = 0;
  double t_raw = 0.0;
  double offset = 0.0;
  double residual = 0.0;
  double t_corrected = 0.0;
};

struct FrameKey {
  std::string camera;
  std::int64_t frame_index = 0;
  auto operator<=>(const FrameKey&) const = default;
};

struct FrameObservation {
  ObjectId object = 0;
  WeightedObservation obs;  // t = offset-corrected frame time
};

inline constexpr double kResidualBound = 1.0 / 30.0 + 0.01;

struct ResidualOptions {
  double bound = kResidualBound;
  double tolerance = 1e-5;  // seconds
};

struct ResidualResult {
  std::map<FrameKey, double> residual;
  int degenerate_frames = 0;  // frames with no usable object, set to 0
};

/// Per frame, the shift eps in [-bound, bound] minimizing
/// sum_i (w_i (f_i(t + eps) - x_i))^2 over the frame's objects, found by
/// golden-section search. The search interval is also kept inside every
/// participating spline's domain.
ResidualResult estimate_residuals(const std::map<ObjectId, TrajectorySpline>& splines,
                                  const std::map<FrameKey, std::vector<FrameObservation>>& frame_obs,
                                  const ResidualOptions& options = {});

}  // namespace roadtrack::timesync
