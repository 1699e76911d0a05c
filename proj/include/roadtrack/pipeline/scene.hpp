#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roadtrack/evaluation/cross_camera.hpp"
#include "roadtrack/geometry/calibration.hpp"
#include "roadtrack/io/formats.hpp"
#include "roadtrack/simulator/config.hpp"

namespace roadtrack::pipeline {

using CameraKey = std::pair<std::string, Direction>;

/// Everything stored in a scene directory.
struct Scene {
  std::string name = "scene";
  std::optional<simulator::SceneConfig> config;
  std::vector<io::LabelRow> labels;          // per-camera annotations, reported timestamps
  std::vector<io::TimestampRow> timestamps;
  std::vector<io::DetectionRow> detections;  // reported timestamps; vehicle_id -1 for false positives
  std::map<CameraKey, io::TransformFile> transforms;
  std::map<CameraKey, geometry::CurveOffset> curves;
  std::map<CameraKey, geometry::CalibrationPoints> points;
  // Simulator ground truth; empty for scenes read from elsewhere.
  std::vector<io::LabelRow> ground_truth;  // true boxes at true times, 30 Hz
  std::vector<io::TruthTimestampRow> truth_timestamps;
  std::vector<io::CameraRow> cameras;

  /// Camera models for cross-camera pixel error; curves attached when
  /// `with_curve` is set.
  evaluation::ProjectionMap projection_map(bool with_curve) const;
};

/// Runs the whole simulator: traffic, cameras, survey and calibration,
/// rendering, annotation and detections. Cameras are processed on up to
/// `jobs` threads; output does not depend on `jobs`.
Scene simulate_scene(const simulator::SceneConfig& config, int jobs = 1);

/// Layout: scene.cfg, {name}_labels.csv, {name}_timestamps.csv,
/// {name}_detections.csv, {name}_gt.csv, {name}_truth_timestamps.csv,
/// {name}_cameras.csv and {name}_transforms/{camera}_{dir}_{homography,curve,points}.csv.
void save_scene(const Scene& scene, const std::string& dir);
Scene load_scene(const std::string& dir);

std::string direction_tag(Direction d);  // "EB" / "WB"

}  // namespace roadtrack::pipeline
