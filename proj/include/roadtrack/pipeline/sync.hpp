#pragma once

#include <map>
#include <string>
#include <vector>

#include "roadtrack/core/keyvalue.hpp"
#include "roadtrack/evaluation/cross_camera.hpp"
#include "roadtrack/pipeline/scene.hpp"
#include "roadtrack/timesync/residuals.hpp"

namespace roadtrack::pipeline {

struct SyncConfig {
  int samples_per_object = 10;
  bool estimate_residuals = true;
  int max_shift_px = 0;  // 0 disables annotation shifting; otherwise 1, 2 or 3

  static SyncConfig from_keyvalue(const KeyValueConfig& kv);
  void validate() const;
};

/// Cross-camera errors after one correction stage.
struct StageMetrics {
  std::string stage;  // homography, curve, offset, residual, shift
  double ccde_x = 0.0, ccde_y = 0.0, ccpe = 0.0;
  std::size_t pairs = 0;
};

struct SyncResult {
  std::map<std::string, double> offsets;  // per camera, first camera 0
  std::vector<timesync::FrameStamp> stamps;
  std::vector<io::TimestampRow> timestamps;  // corrected column filled
  std::vector<StageMetrics> stages;
  int degenerate_frames = 0;
};

/// Offsets by chaining neighbouring cameras (cameras in name order; a camera
/// with no shared objects with its predecessor links to the nearest earlier
/// camera that has some), splines per object on offset-corrected times,
/// per-frame residuals, and the cross-camera metrics after each stage.
/// Curve stage metrics need the scene's curve files; without them the
/// homography and curve stages coincide.
SyncResult synchronize(const Scene& scene, const SyncConfig& config = {});

/// Labels with timestamps replaced by the corrected ones.
std::vector<io::LabelRow> corrected_labels(const std::vector<io::LabelRow>& labels,
                                           const std::vector<io::TimestampRow>& timestamps);

/// Labels on corrected time as one continuous 30 Hz trajectory per vehicle,
/// sampled from a spline fit. Each tick gets a row for every camera whose
/// annotations of the vehicle span it (camera "none" when no camera does),
/// with the box corners projected through that camera's P. Dimensions are
/// per-vehicle medians, the class is the most frequent one. Frame indices
/// count 30 Hz ticks from the earliest corrected time in the scene.
std::vector<io::ResampledRow> resampled_labels(const Scene& scene, const std::vector<io::TimestampRow>& timestamps);

}  // namespace roadtrack::pipeline
