#include "roadtrack/geometry/calibration.hpp"

namespace roadtrack::geometry {

Calibration calibrate(const CalibrationPoints& pts) {
  Calibration cal;
  cal.h = fit_road_homography(pts.ground);
  cal.homography_rmse_ft = reprojection_rmse(cal.h, pts.ground);
  cal.vanishing_point = intersect_vertical_lines(pts.verticals);
  cal.projection = fit_projection(inverse(cal.h), cal.vanishing_point, pts.heights);
  if (!pts.lane.empty()) {
    std::vector<RoadPoint> lane;
    lane.reserve(pts.lane.size());
    for (const auto& p : pts.lane) lane.push_back(image_to_road(cal.h, p));
    cal.curve = fit_curve_offset(lane);
  }
  return cal;
}

}  // namespace roadtrack::geometry
