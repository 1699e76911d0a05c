#include "roadtrack/timesync/shift.hpp"

#include <algorithm>
#include <cmath>

#include "roadtrack/core/error.hpp"

namespace roadtrack::timesync {

std::vector<ShiftedObservation> shift_annotations(std::span<const FrameObservation> obs,
                                                  const std::map<ObjectId, TrajectorySpline>& splines,
                                                  int max_shift_px) {
  if (max_shift_px < 1 || max_shift_px > 3) {
    fail(ErrorKind::kValidationError, "max_shift_px must be 1, 2 or 3");
  }
  std::vector<ShiftedObservation> out;
  out.reserve(obs.size());
  for (const auto& item : obs) {
    ShiftedObservation s{item, 0.0, 0.0};
    const auto it = splines.find(item.object);
    if (it != splines.end() && it->second.covers(item.obs.t) && item.obs.weight > 0.0) {
      const auto [fx, fy] = it->second.eval(item.obs.t);
      const double limit_ft = max_shift_px / item.obs.weight;
      const double dx = std::clamp(fx - item.obs.x, -limit_ft, limit_ft);
      const double dy = std::clamp(fy - item.obs.y, -limit_ft, limit_ft);
      s.item.obs.x += dx;
      s.item.obs.y += dy;
      s.shift_px_x = std::abs(dx) * item.obs.weight;
      s.shift_px_y = std::abs(dy) * item.obs.weight;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace roadtrack::timesync
