#pragma once

#include <span>

#include "roadtrack/core/types.hpp"

namespace roadtrack::geometry {

/// f(x) = c2 x^2 + c1 x + c0, the lateral drift of a straight lane line in
/// homography road coordinates.
struct CurveOffset {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double x) const { return c0 + c1 * x + c2 * (x * x); }
  bool operator==(const CurveOffset&) const = default;
};

/// Least-squares quadratic through lane-line points (x, y).
/// Throws TooFewPoints (< 3) or DegenerateX (fewer than 3 distinct x).
CurveOffset fit_curve_offset(std::span<const RoadPoint> lane_line);

/// Forward: y - f(x). Inverse: y + f(x). x and z are untouched.
RoadPoint apply_curvature(const CurveOffset& c, const RoadPoint& p, bool inverse = false);

}  // namespace roadtrack::geometry
