#pragma once

#include <map>
#include <span>
#include <vector>

#include "roadtrack/timesync/residuals.hpp"
#include "roadtrack/timesync/spline.hpp"

namespace roadtrack::timesync {

struct ShiftedObservation {
  FrameObservation item;
  double shift_px_x = 0.0;
  double shift_px_y = 0.0;
};

/// Moves each observation toward its object's spline at the observation time
/// (the corrected time), by at most max_shift_px pixels per axis, using the
/// observation weight as the pixels-per-foot conversion. Observations whose
/// object has no spline covering the time pass through unchanged.
/// max_shift_px must be 1, 2 or 3 (ValidationError otherwise).
std::vector<ShiftedObservation> shift_annotations(std::span<const FrameObservation> obs,
                                                  const std::map<ObjectId, TrajectorySpline>& splines,
                                                  int max_shift_px);

}  // namespace roadtrack::timesync
