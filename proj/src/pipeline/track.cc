#include "roadtrack/pipeline/track.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "roadtrack/core/error.hpp"
#include "roadtrack/timesync/residuals.hpp"

namespace roadtrack::pipeline {

std::string_view to_string(TrackerChoice t) {
  switch (t) {
    case TrackerChoice::kKiou:
      return "kiou";
    case TrackerChoice::kByte:
      return "byte";
    case TrackerChoice::kGtTracklets:
      return "gt-tracklets";
  }
  return "?";
}

TrackerChoice parse_tracker_choice(std::string_view s) {
  if (s == "kiou") return TrackerChoice::kKiou;
  if (s == "byte") return TrackerChoice::kByte;
  if (s == "gt-tracklets") return TrackerChoice::kGtTracklets;
  fail(ErrorKind::kValidationError, fmt::format("unknown tracker '{}' (kiou, byte, gt-tracklets)", s));
}

std::string_view to_string(DetectorSource s) { return s == DetectorSource::kSimulated ? "simulated" : "csv"; }

DetectorSource parse_detector_source(std::string_view s) {
  if (s == "simulated") return DetectorSource::kSimulated;
  if (s == "csv") return DetectorSource::kCsv;
  fail(ErrorKind::kValidationError, fmt::format("unknown detector_source '{}' (simulated, csv)", s));
}

std::string PipelineSpec::name() const {
  return fmt::format("{}+{}", to_string(tracker), tracking::to_string(tracking.fusion));
}

PipelineSpec PipelineSpec::from_keyvalue(const KeyValueConfig& kv) {
  PipelineSpec spec;
  KeyValueConfig tracker_kv, eval_kv;
  for (const auto& [key, value] : kv.values()) {
    if (key == "detector_source") {
      spec.detector_source = parse_detector_source(value);
    } else if (key == "tracker") {
      spec.tracker = parse_tracker_choice(value);
    } else if (key.rfind("eval.", 0) == 0) {
      eval_kv.set(key.substr(5), value);
    } else {
      tracker_kv.set(key, value);
    }
  }
  spec.tracking = tracking::TrackerConfig::from_keyvalue(tracker_kv);
  spec.tracking.tracker = spec.tracker == TrackerChoice::kByte ? tracking::TrackerKind::kByte
                                                               : tracking::TrackerKind::kKiou;
  spec.eval = evaluation::EvalConfig::from_keyvalue(eval_kv);
  spec.validate();
  return spec;
}

void PipelineSpec::validate() const {
  tracking.validate();
  eval.validate();
  if (tracker == TrackerChoice::kGtTracklets && tracking::uses_df(tracking.fusion)) {
    fail(ErrorKind::kValidationError, "gt-tracklets has no detections to fuse; use fusion none or tf");
  }
  const bool byte = tracking.tracker == tracking::TrackerKind::kByte;
  if ((tracker == TrackerChoice::kByte) != byte) {
    fail(ErrorKind::kValidationError, "tracker choice and tracker kind disagree");
  }
}

std::vector<tracking::DetectionFrame> detection_frames(const std::vector<io::DetectionRow>& detections,
                                                       const std::vector<io::TimestampRow>& timestamps) {
  std::map<timesync::FrameKey, tracking::DetectionFrame> frames;
  for (const auto& t : timestamps) {
    auto& f = frames[{t.camera, t.frame_index}];
    f.camera = t.camera;
    f.frame_index = t.frame_index;
    f.t = t.corrected_timestamp;
  }
  for (const auto& d : detections) {
    const auto it = frames.find({d.label.camera, d.label.frame_index});
    if (it == frames.end()) {
      fail(ErrorKind::kSchemaMismatch, fmt::format("detection for camera {} frame {} has no timestamp row",
                                                   d.label.camera, d.label.frame_index));
    }
    it->second.detections.push_back({d.label.box, d.confidence, d.label.camera, it->second.t});
  }
  std::vector<tracking::DetectionFrame> out;
  out.reserve(frames.size());
  for (auto& [key, f] : frames) out.push_back(std::move(f));
  return out;
}

std::vector<tracking::Trajectory> run_tracker(const PipelineSpec& spec,
                                              const std::vector<io::DetectionRow>& detections,
                                              const std::vector<io::LabelRow>& labels,
                                              const std::vector<io::TimestampRow>& timestamps) {
  spec.validate();
  if (spec.tracker == TrackerChoice::kGtTracklets) {
    std::map<timesync::FrameKey, double> corrected;
    for (const auto& t : timestamps) corrected[{t.camera, t.frame_index}] = t.corrected_timestamp;
    std::map<std::pair<std::string, ObjectId>, tracking::Tracklet> grouped;
    for (const auto& l : labels) {
      const auto it = corrected.find({l.camera, l.frame_index});
      const double t = it == corrected.end() ? l.timestamp : it->second;
      auto& tr = grouped[{l.camera, l.vehicle_id}];
      tr.camera = l.camera;
      tr.samples.push_back({t, l.box});
    }
    std::vector<tracking::Tracklet> tracklets;
    std::int64_t next_id = 1;
    for (auto& [key, tr] : grouped) {
      std::stable_sort(tr.samples.begin(), tr.samples.end(),
                       [](const tracking::TrackSample& a, const tracking::TrackSample& b) { return a.t < b.t; });
      // Repeated frames carry the same stamp; keep the first.
      tr.samples.erase(std::unique(tr.samples.begin(), tr.samples.end(),
                                   [](const tracking::TrackSample& a, const tracking::TrackSample& b) {
                                     return a.t == b.t;
                                   }),
                       tr.samples.end());
      tr.id = next_id++;
      tracklets.push_back(std::move(tr));
    }
    return tracking::trajectories_from_tracklets(std::move(tracklets), spec.tracking);
  }
  const auto frames = detection_frames(detections, timestamps);
  return tracking::track_scene(frames, spec.tracking).trajectories;
}

std::vector<io::LabelRow> trajectories_to_labels(const std::vector<tracking::Trajectory>& trajectories) {
  std::vector<io::LabelRow> out;
  for (const auto& tr : trajectories) {
    std::string cams;
    for (const auto& c : tr.cameras) cams += (cams.empty() ? "" : "+") + c;
    for (std::size_t k = 0; k < tr.smoothed.size(); ++k) {
      out.push_back({static_cast<std::int64_t>(k), tr.smoothed[k].t, tr.id, tr.smoothed[k].box, cams});
    }
  }
  return out;
}

std::vector<evaluation::ObjectTrack> labels_to_tracks(const std::vector<io::LabelRow>& labels) {
  std::map<ObjectId, evaluation::ObjectTrack> grouped;
  for (const auto& l : labels) {
    auto& o = grouped[l.vehicle_id];
    o.id = l.vehicle_id;
    o.samples.push_back({l.timestamp, l.box});
  }
  std::vector<evaluation::ObjectTrack> out;
  for (auto& [id, o] : grouped) out.push_back(std::move(o));
  return out;
}

}  // namespace roadtrack::pipeline
