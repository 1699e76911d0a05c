#pragma once

#include <span>
#include <vector>

#include "roadtrack/core/keyvalue.hpp"
#include "roadtrack/core/types.hpp"
#include "roadtrack/tracking/stitching.hpp"

namespace roadtrack::evaluation {

using tracking::TrackSample;

struct EvalConfig {
  double iou_threshold = 0.3;
  double resample_rate = 30.0;  // Hz
  std::vector<double> hota_thresholds = default_hota_thresholds();
  /// Compare each GT object only over the span covered by the predictions
  /// that match it somewhere, instead of its whole life.
  bool clip_to_matched_window = true;

  static std::vector<double> default_hota_thresholds();  // 0.05, 0.10, ..., 0.95
  static EvalConfig from_keyvalue(const KeyValueConfig& kv);
  void validate() const;
};

/// All samples of one object (GT annotations from any camera, or a tracker output).
struct ObjectTrack {
  ObjectId id = 0;
  std::vector<TrackSample> samples;
};

/// Samples at ticks origin + k / rate inside the object's time span. Objects
/// with >= 4 distinct annotation times are smoothed with a cubic spline; the
/// rest are linearly interpolated. Dims are the annotation mean, class the
/// majority vote.
std::vector<TrackSample> resample_ground_truth(const ObjectTrack& gt, double rate, double origin);

/// Linear interpolation of a time-sorted track at the same ticks.
std::vector<TrackSample> resample_prediction(const ObjectTrack& pred, double rate, double origin);

struct AlignedFrame {
  double t = 0.0;
  std::vector<ObjectId> gt_ids;
  std::vector<Box3D> gt;
  std::vector<ObjectId> pred_ids;
  std::vector<Box3D> pred;
};

using AlignedSequence = std::vector<AlignedFrame>;

/// GT and predictions on a shared 30 Hz tick grid over their temporal overlap.
AlignedSequence align(std::span<const ObjectTrack> gt, std::span<const ObjectTrack> pred,
                      const EvalConfig& config);

}  // namespace roadtrack::evaluation
