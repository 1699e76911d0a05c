#include "roadtrack/timesync/offsets.hpp"

#include <algorithm>
#include <deque>
#include <optional>

#include <spdlog/spdlog.h>

#include "roadtrack/core/error.hpp"

namespace roadtrack::timesync {

namespace {

// Sorted by time with repeated timestamps (doubled frames) collapsed to the first.
std::vector<TimedPosition> clean(const std::vector<TimedPosition>& in) {
  std::vector<TimedPosition> out = in;
  std::stable_sort(out.begin(), out.end(),
                   [](const TimedPosition& p, const TimedPosition& q) { return p.t < q.t; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const TimedPosition& p, const TimedPosition& q) { return p.t == q.t; }),
            out.end());
  return out;
}

// Strictly monotone in x over [lo, hi], counting the samples that bracket the range.
bool monotone_over(const std::vector<TimedPosition>& track, double lo, double hi) {
  std::size_t first = track.size(), last = 0;
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (track[i].x >= lo && track[i].x <= hi) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  if (first == track.size()) {
    // Range falls between two samples; check the pair that brackets it.
    first = 0;
    last = track.size() - 1;
  }
  if (first > 0) --first;
  if (last + 1 < track.size()) ++last;
  if (last <= first) return true;
  const bool up = track[first + 1].x > track[first].x;
  for (std::size_t i = first + 1; i <= last; ++i) {
    const double d = track[i].x - track[i - 1].x;
    if (up ? !(d > 0.0) : !(d < 0.0)) return false;
  }
  return true;
}

// Time at which a monotone track passes x; exact hits take the earliest frame.
std::optional<double> time_at(const std::vector<TimedPosition>& track, double x) {
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (track[i].x == x) return track[i].t;
    if (i + 1 < track.size()) {
      const double x0 = track[i].x, x1 = track[i + 1].x;
      if ((x0 < x && x < x1) || (x1 < x && x < x0)) {
        const double f = (x - x0) / (x1 - x0);
        return track[i].t + f * (track[i + 1].t - track[i].t);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

PairwiseOffsetResult pairwise_offset(const ObjectTracks& a, const ObjectTracks& b,
                                     int samples_per_object) {
  if (samples_per_object < 1) {
    fail(ErrorKind::kValidationError, "samples_per_object must be >= 1");
  }
  PairwiseOffsetResult result;
  double sum = 0.0;
  long count = 0;
  for (const auto& [id, raw_a] : a) {
    const auto it = b.find(id);
    if (it == b.end()) continue;
    const auto ta = clean(raw_a);
    const auto tb = clean(it->second);
    if (ta.size() < 2 || tb.size() < 2) continue;
    auto range = [](const std::vector<TimedPosition>& t) {
      const auto [mn, mx] = std::minmax_element(
          t.begin(), t.end(), [](const TimedPosition& p, const TimedPosition& q) { return p.x < q.x; });
      return std::pair{mn->x, mx->x};
    };
    const auto [a_lo, a_hi] = range(ta);
    const auto [b_lo, b_hi] = range(tb);
    const double lo = std::max(a_lo, b_lo);
    const double hi = std::min(a_hi, b_hi);
    if (!(hi > lo)) continue;
    if (!monotone_over(ta, lo, hi) || !monotone_over(tb, lo, hi)) {
      result.non_monotone.push_back(id);
      spdlog::debug("object {} reverses in x inside the shared range; excluded", id);
      continue;
    }
    double obj_sum = 0.0;
    int obj_count = 0;
    for (int r = 0; r < samples_per_object; ++r) {
      const double x = samples_per_object == 1
                           ? 0.5 * (lo + hi)
                           : lo + (hi - lo) * static_cast<double>(r) / (samples_per_object - 1);
      const auto tau_a = time_at(ta, x);
      const auto tau_b = time_at(tb, x);
      if (!tau_a || !tau_b) continue;
      obj_sum += *tau_a - *tau_b;
      ++obj_count;
    }
    if (obj_count == 0) continue;
    sum += obj_sum;
    count += obj_count;
    ++result.objects_used;
  }
  if (count == 0) fail(ErrorKind::kNoSharedObjects, "cameras share no usable object");
  result.offset = sum / static_cast<double>(count);
  return result;
}

std::map<std::string, double> chain_offsets(std::span<const std::string> cameras,
                                            std::span<const PairwiseOffset> pairwise) {
  std::map<std::string, double> out;
  if (cameras.empty()) return out;
  out[cameras.front()] = 0.0;
  std::deque<std::string> frontier{cameras.front()};
  while (!frontier.empty()) {
    const std::string cur = frontier.front();
    frontier.pop_front();
    for (const auto& p : pairwise) {
      if (p.previous == cur && !out.count(p.camera)) {
        out[p.camera] = out[cur] + p.offset;
        frontier.push_back(p.camera);
      } else if (p.camera == cur && !out.count(p.previous)) {
        out[p.previous] = out[cur] - p.offset;
        frontier.push_back(p.previous);
      }
    }
  }
  for (const auto& c : cameras) {
    if (!out.count(c)) fail(ErrorKind::kDisconnectedChain, "camera '" + c + "' is not linked");
  }
  return out;
}

}  // namespace roadtrack::timesync
