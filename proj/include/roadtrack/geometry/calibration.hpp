#pragma once

#include <vector>

#include "roadtrack/geometry/curve.hpp"
#include "roadtrack/geometry/homography.hpp"
#include "roadtrack/geometry/projection.hpp"

namespace roadtrack::geometry {

/// Hand-clicked survey for one (camera, direction).
struct CalibrationPoints {
  std::vector<Correspondence> ground;   // lane-tick ends with known road position
  std::vector<ImagePoint> lane;         // points along a solid lane line
  std::vector<LineSegment> verticals;   // lines drawn along vertical structures
  std::vector<HeightSample> heights;    // points with known height above the road
};

struct Calibration {
  Homography h;          // image -> road
  CameraProjection projection;
  CurveOffset curve;
  ImagePoint vanishing_point;
  double homography_rmse_ft = 0.0;
};

/// Homography, then vanishing point and P, then the lane-line curve (skipped
/// when no lane points are given).
Calibration calibrate(const CalibrationPoints& pts);

}  // namespace roadtrack::geometry
