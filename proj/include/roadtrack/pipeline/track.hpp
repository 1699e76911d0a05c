#pragma once

#include <string>
#include <vector>

#include "roadtrack/core/keyvalue.hpp"
#include "roadtrack/evaluation/alignment.hpp"
#include "roadtrack/io/formats.hpp"
#include "roadtrack/tracking/tracker.hpp"

namespace roadtrack::pipeline {

enum class DetectorSource { kSimulated, kCsv };
enum class TrackerChoice { kKiou, kByte, kGtTracklets };

std::string_view to_string(TrackerChoice t);
TrackerChoice parse_tracker_choice(std::string_view s);  // ValidationError
std::string_view to_string(DetectorSource s);
DetectorSource parse_detector_source(std::string_view s);

/// detector_source, tracker, fusion and the tracker/eval parameters.
/// Tracker keys are the TrackerConfig ones; eval keys carry an "eval."
/// prefix.
struct PipelineSpec {
  DetectorSource detector_source = DetectorSource::kSimulated;
  TrackerChoice tracker = TrackerChoice::kKiou;
  tracking::TrackerConfig tracking;
  evaluation::EvalConfig eval;

  std::string name() const;  // e.g. "kiou+df+tf", "byte+none"
  static PipelineSpec from_keyvalue(const KeyValueConfig& kv);
  void validate() const;
};

/// Detection rows to per-frame tracker input on corrected time. Every frame
/// listed in `timestamps` is included, with or without detections.
std::vector<tracking::DetectionFrame> detection_frames(const std::vector<io::DetectionRow>& detections,
                                                       const std::vector<io::TimestampRow>& timestamps);

/// Runs the configured tracker. `detections` feed kiou/byte; `labels`
/// (annotations) feed gt-tracklets. Both use the corrected timestamps.
std::vector<tracking::Trajectory> run_tracker(const PipelineSpec& spec,
                                              const std::vector<io::DetectionRow>& detections,
                                              const std::vector<io::LabelRow>& labels,
                                              const std::vector<io::TimestampRow>& timestamps);

/// Trajectories as label rows: frame_index counts samples within each
/// trajectory, camera lists the contributing cameras joined by '+'.
std::vector<io::LabelRow> trajectories_to_labels(const std::vector<tracking::Trajectory>& trajectories);

/// Label rows grouped by vehicle id into evaluation tracks.
std::vector<evaluation::ObjectTrack> labels_to_tracks(const std::vector<io::LabelRow>& labels);

}  // namespace roadtrack::pipeline
