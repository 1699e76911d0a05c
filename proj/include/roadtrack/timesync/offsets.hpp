#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "roadtrack/core/types.hpp"

namespace roadtrack::timesync {

struct TimedPosition {
  double t = 0.0;
  double x = 0.0;
};

/// Per-object (t, x) annotations from one camera.
using ObjectTracks = std::map<ObjectId, std::vector<TimedPosition>>;

struct PairwiseOffsetResult {
  double offset = 0.0;  // mean(tau_a - tau_b)
  int objects_used = 0;
  std::vector<ObjectId> non_monotone;  // shared objects excluded for reversing in x
};

/// For every object seen by both cameras with overlapping x-range, samples s
/// evenly spaced x values (ends included) over the shared range, finds the
/// time each camera places the object there by linear interpolation, and
/// returns the mean of tau_a - tau_b. With raw = true - o this estimates
/// o_b - o_a. Throws NoSharedObjects.
PairwiseOffsetResult pairwise_offset(const ObjectTracks& a, const ObjectTracks& b,
                                     int samples_per_object = 10);

struct PairwiseOffset {
  std::string camera;    // k
  std::string previous;  // k-1
  double offset = 0.0;   // o_k - o_{k-1}
};

/// o = 0 for cameras.front(); every other camera reached through the pairwise
/// links. Throws DisconnectedChain when one cannot be reached.
std::map<std::string, double> chain_offsets(std::span<const std::string> cameras,
                                            std::span<const PairwiseOffset> pairwise);

}  // namespace roadtrack::timesync
