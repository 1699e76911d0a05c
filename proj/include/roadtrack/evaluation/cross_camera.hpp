#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roadtrack/core/types.hpp"
#include "roadtrack/geometry/curve.hpp"
#include "roadtrack/geometry/projection.hpp"

namespace roadtrack::evaluation {

/// Rear-bottom-center of one annotation in roadway coordinates.
struct CameraAnnotation {
  ObjectId object = 0;
  std::string camera;
  Direction direction = Direction::kEB;
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  std::int64_t frame_index = 0;
};

/// An annotation from camera a and the same object's position in camera b,
/// linearly interpolated to the same time.
struct CrossCameraPair {
  ObjectId object = 0;
  std::string camera_a, camera_b;
  Direction direction = Direction::kEB;
  double t = 0.0;
  std::int64_t frame_a = 0;  // frame of the camera-a annotation
  RoadPoint a, b;
};

/// Both orders (a, b) and (b, a) are emitted, so the pair set does not depend
/// on which camera is listed first.
std::vector<CrossCameraPair> build_cross_camera_pairs(std::span<const CameraAnnotation> annotations);

struct CcdeResult {
  double dx = 0.0;  // mean |x_a - x_b|, ft
  double dy = 0.0;
  std::size_t pairs = 0;
};

CcdeResult ccde(std::span<const CrossCameraPair> pairs);

struct CameraModel {
  geometry::CameraProjection projection;
  /// When set, road points are first mapped back to the camera's
  /// uncorrected frame with the inverse curve.
  std::optional<geometry::CurveOffset> curve;
};

using ProjectionMap = std::map<std::pair<std::string, Direction>, CameraModel>;

struct CcpeResult {
  double mean_px = 0.0;
  std::size_t pairs = 0;
  std::size_t excluded = 0;  // at infinity or no projection for camera b
};

/// Both points of each pair projected into camera b's image.
CcpeResult ccpe(std::span<const CrossCameraPair> pairs, const ProjectionMap& projections);

/// Sum of |dx| over consecutive samples divided by (max x - min x).
/// Throws ZeroDistance.
double total_variation(std::span<const double> x);

}  // namespace roadtrack::evaluation
