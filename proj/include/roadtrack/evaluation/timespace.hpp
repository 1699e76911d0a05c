#pragma once

#include <string_view>

#include <vector>

#include "roadtrack/evaluation/clearmot.hpp"

namespace roadtrack::evaluation {

enum class PointStatus { kTP, kFP, kFN };
const char* to_string(PointStatus s);
PointStatus parse_point_status(std::string_view s);  // ParseError

struct TimeSpacePoint {
  Direction direction = Direction::kEB;
  int lane = 1;  // 1 is the lane next to the median
  double t = 0.0;
  double x = 0.0;
  ObjectId id = 0;  // prediction id for TP/FP, GT id for FN
  PointStatus status = PointStatus::kTP;
  bool operator==(const TimeSpacePoint&) const = default;
};

/// Plot-ready x(t) points per lane. Matched pairs are placed at the GT box,
/// unmatched boxes at their own position.
std::vector<TimeSpacePoint> emit_timespace(const AlignedSequence& seq, const MatchedSequence& matches,
                                           double lane_width = 12.0);

}  // namespace roadtrack::evaluation
