#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadtrack/core/types.hpp"
#include "roadtrack/timesync/spline.hpp"

namespace roadtrack::tracking {

struct TrackSample {
  double t = 0.0;
  Box3D box;
};

/// Output of one online tracker; sample times strictly increasing.
struct Tracklet {
  std::int64_t id = 0;
  std::string camera;  // originating camera, or "fused"
  std::vector<TrackSample> samples;

  double start() const { return samples.front().t; }
  double end() const { return samples.back().t; }
};

/// A chain of tracklets. `samples` is the union of the members' samples
/// (time-sorted, possibly with repeated times); `smoothed` is what gets
/// reported: the refit spline at every distinct sample time, or the lone
/// member's samples when nothing was merged.
struct Trajectory {
  std::int64_t id = 0;
  std::vector<std::int64_t> members;
  std::vector<std::string> cameras;
  std::vector<TrackSample> samples;
  std::vector<TrackSample> smoothed;
  std::optional<timesync::TrajectorySpline> spline;
};

struct StitchParams {
  double t_overlap = 0.5;      // s; longer overlaps need IOU > 0 at every shared time
  double t_gap_max = 10.0;     // s
  double lambda_dim = 0.5;     // cost per foot of summed |dl| + |dw| + |dh|
  double max_cost = 15.0;      // ft
  double lateral_gate = 6.0;   // ft
  double tail_window = 1.0;    // s of A's tail (or B's head) used for the velocity estimate
};

/// Link cost of B following A, or nullopt when the pair is not admissible.
std::optional<double> stitch_cost(const Tracklet& a, const Tracklet& b, const StitchParams& p);

/// Offline stitching: admissible ordered pairs, minimum-cost one-to-one
/// matching (unmatched cost = max_cost), chains followed from their heads and
/// refit. Directions are never mixed.
std::vector<Trajectory> stitch_tracklets(std::span<const Tracklet> tracklets,
                                         const StitchParams& params = {});

}  // namespace roadtrack::tracking
