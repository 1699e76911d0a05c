#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "roadtrack/core/types.hpp"
#include "roadtrack/tracking/kalman.hpp"

namespace roadtrack::tracking {

struct Association {
  std::vector<std::pair<int, int>> matches;  // (track index, detection index)
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

/// Hungarian assignment maximizing total footprint IOU over pairs with
/// IOU >= min_iou. `tracks` are predicted boxes.
Association associate_kiou(std::span<const Box3D> tracks, std::span<const Box3D> detections,
                           double min_iou);

/// Same rule on a precomputed track x detection IOU matrix.
Association associate_matrix(const Eigen::MatrixXd& iou, double min_iou);

struct ByteThresholds {
  double high = 0.3;   // stage 1 takes confidence >= high
  double low = 0.01;   // stage 2 takes confidence in [low, high)
  double min_iou = 0.3;
};

struct ByteAssociation {
  std::vector<std::pair<int, int>> matches;  // stage 1 and stage 2 combined
  std::vector<int> unmatched_tracks;
  std::vector<int> spawn;      // unmatched high-confidence detections
  std::vector<int> discarded;  // below `low`, plus unmatched low-band detections
};

/// Two-stage association. New tracks may only come from `spawn`.
ByteAssociation associate_byte(std::span<const Box3D> tracks, std::span<const Detection> detections,
                               const ByteThresholds& thresholds = {});

ByteAssociation associate_byte_matrix(const Eigen::MatrixXd& iou, std::span<const double> confidence,
                                      const ByteThresholds& thresholds = {});

}  // namespace roadtrack::tracking
