#pragma once

#include <map>
#include <utility>

#include "roadtrack/core/rng.hpp"
#include "roadtrack/geometry/calibration.hpp"
#include "roadtrack/simulator/cameras.hpp"

namespace roadtrack::simulator {

/// Clicked survey for one camera and travel direction: ticks on the dashed
/// lane lines (two ends, 10 ft apart, every 40 ft in the central 60% of the
/// field of view), the solid median line every 20 ft, and four 15 ft
/// vertical posts on that direction's shoulder whose tops double as height
/// samples. Road coordinates are the straight-road ones; the image side goes
/// through the bent road, so curvature shows up as fit error.
geometry::CalibrationPoints survey_points(const SceneConfig& cfg, const SimCamera& cam, Direction dir,
                                          Rng& rng);

using CalibrationKey = std::pair<std::string, Direction>;

struct SurveyedCamera {
  geometry::CalibrationPoints points;
  geometry::Calibration calibration;
};

/// Survey and calibrate every (camera, direction).
std::map<CalibrationKey, SurveyedCamera> survey_scene(const SceneConfig& cfg,
                                                      const std::vector<SimCamera>& cams);

/// Where an annotator would put a box: the rear-bottom-center pixel (with
/// click noise) taken back to road coordinates through H and the curve.
RoadPoint annotate_point(const SceneConfig& cfg, const SimCamera& cam, const geometry::Calibration& cal,
                         const RoadPoint& truth, Rng& rng);

}  // namespace roadtrack::simulator
