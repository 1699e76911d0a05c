#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadtrack/core/keyvalue.hpp"
#include "roadtrack/tracking/association.hpp"
#include "roadtrack/tracking/kalman.hpp"
#include "roadtrack/tracking/stitching.hpp"

namespace roadtrack::tracking {

enum class TrackerKind { kKiou, kByte };
enum class Fusion { kNone, kDf, kTf, kDfTf };

std::string_view to_string(TrackerKind k);
std::string_view to_string(Fusion f);
TrackerKind parse_tracker_kind(std::string_view s);  // ValidationError on unknown names
Fusion parse_fusion(std::string_view s);
inline bool uses_df(Fusion f) { return f == Fusion::kDf || f == Fusion::kDfTf; }
inline bool uses_tf(Fusion f) { return f == Fusion::kTf || f == Fusion::kDfTf; }

struct TrackerConfig {
  TrackerKind tracker = TrackerKind::kKiou;
  Fusion fusion = Fusion::kNone;
  double min_iou = 0.3;
  double byte_high = 0.3;
  double byte_low = 0.01;
  double df_iou = 0.01;
  int n_init = 3;
  int n_miss = 8;
  double rate_hz = 15.0;
  double sync_tolerance = 1.0 / 60.0;
  KalmanConfig kalman;
  StitchParams stitch;

  /// Keys: tracker, fusion, min_iou, byte_high, byte_low, df_iou, n_init,
  /// n_miss, rate_hz, sync_tolerance, kalman.q (4 values), kalman.r (2),
  /// stitch.t_overlap, stitch.t_gap_max, stitch.lambda_dim, stitch.max_cost,
  /// stitch.lateral_gate. Unknown keys are rejected.
  static TrackerConfig from_keyvalue(const KeyValueConfig& kv);
  void validate() const;
};

/// One camera frame after timestamp correction.
struct DetectionFrame {
  std::string camera;
  std::int64_t frame_index = 0;
  double t = 0.0;
  std::vector<Detection> detections;
};

struct TrackingOutput {
  std::vector<Trajectory> trajectories;
  int ticks = 0;
};

/// Runs a 15 Hz global clock from the earliest to the latest frame. At each
/// tick every camera contributes its frame nearest the tick if within
/// sync_tolerance. EB and WB are tracked separately; without DF each camera
/// has its own tracker. Confirmed tracks are emitted from birth to their last
/// hit, including coasted ticks in between. Throws EmptyScene.
TrackingOutput track_scene(std::span<const DetectionFrame> frames, const TrackerConfig& config);

/// Stand-in for a perfect single-camera tracker: groups ground-truth boxes
/// per (camera, object) into tracklets, then applies TF when requested.
std::vector<Trajectory> trajectories_from_tracklets(std::vector<Tracklet> tracklets,
                                                    const TrackerConfig& config);

}  // namespace roadtrack::tracking
