#include "roadtrack/tracking/stitching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "roadtrack/core/hungarian.hpp"
#include "roadtrack/tracking/iou.hpp"

namespace roadtrack::tracking {

namespace {

struct MeanDims {
  double l = 0.0, w = 0.0, h = 0.0;
};

MeanDims mean_dims(const Tracklet& t) {
  MeanDims m;
  for (const auto& s : t.samples) {
    m.l += s.box.l;
    m.w += s.box.w;
    m.h += s.box.h;
  }
  const double n = static_cast<double>(t.samples.size());
  return {m.l / n, m.w / n, m.h / n};
}

// Linear interpolation of the box position inside the tracklet's span.
Box3D box_at(const Tracklet& t, double time) {
  const auto& s = t.samples;
  auto it = std::lower_bound(s.begin(), s.end(), time,
                             [](const TrackSample& a, double v) { return a.t < v; });
  if (it == s.begin()) return s.front().box;
  if (it == s.end()) return s.back().box;
  if (it->t == time) return it->box;
  const auto& p = *(it - 1);
  const double f = (time - p.t) / (it->t - p.t);
  Box3D b = p.box;
  b.x = p.box.x + f * (it->box.x - p.box.x);
  b.y = p.box.y + f * (it->box.y - p.box.y);
  return b;
}

// Least-squares velocity over the samples within `window` of the tracklet's
// end (tail) or start (head). nullopt with fewer than two distinct times.
std::optional<std::pair<double, double>> window_velocity(const Tracklet& t, double window, bool tail) {
  const double ref = tail ? t.end() : t.start();
  double st = 0, sx = 0, sy = 0, stt = 0, stx = 0, sty = 0;
  int n = 0;
  auto add = [&](const TrackSample& s) {
    const double dt = s.t - ref;
    st += dt;
    sx += s.box.x;
    sy += s.box.y;
    stt += dt * dt;
    stx += dt * s.box.x;
    sty += dt * s.box.y;
    ++n;
  };
  if (tail) {
    for (auto it = t.samples.rbegin(); it != t.samples.rend() && ref - it->t <= window; ++it) add(*it);
  } else {
    for (auto it = t.samples.begin(); it != t.samples.end() && it->t - ref <= window; ++it) add(*it);
  }
  const double den = n * stt - st * st;
  if (n < 2 || !(den > 0.0)) return std::nullopt;
  return std::pair{(n * stx - st * sx) / den, (n * sty - st * sy) / den};
}

// Strict order on (start, end, id). A tracklet lying inside another's span
// (a vehicle already in view when the recording starts) still gets a place
// in the chain.
bool precedes(const Tracklet& a, const Tracklet& b) {
  if (a.start() != b.start()) return a.start() < b.start();
  if (a.end() != b.end()) return a.end() < b.end();
  return a.id < b.id;
}

}  // namespace

std::optional<double> stitch_cost(const Tracklet& a, const Tracklet& b, const StitchParams& p) {
  if (a.samples.empty() || b.samples.empty()) return std::nullopt;
  if (a.samples.front().box.direction != b.samples.front().box.direction) return std::nullopt;
  if (!precedes(a, b)) return std::nullopt;
  const double gap = b.start() - a.end();
  if (gap > p.t_gap_max) return std::nullopt;

  const MeanDims da = mean_dims(a), db = mean_dims(b);
  const double dim_cost =
      p.lambda_dim * (std::abs(da.l - db.l) + std::abs(da.w - db.w) + std::abs(da.h - db.h));

  double distance = 0.0;
  if (gap >= 0.0) {
    // A's tail velocity; B's head velocity when A is too short to have one.
    auto v = window_velocity(a, p.tail_window, true);
    if (!v) v = window_velocity(b, p.tail_window, false);
    const auto [vx, vy] = v.value_or(std::pair{0.0, 0.0});
    const Box3D& last = a.samples.back().box;
    const Box3D& first = b.samples.front().box;
    const double dx = first.x - (last.x + vx * gap);
    const double dy = first.y - (last.y + vy * gap);
    if (std::abs(dy) > p.lateral_gate) return std::nullopt;
    distance = std::hypot(dx, dy);
  } else {
    const double overlap = a.end() - b.start();
    double sum = 0.0, sum_dy = 0.0;
    int n = 0;
    for (const auto& s : b.samples) {
      if (s.t > a.end()) break;
      const Box3D ab = box_at(a, s.t);
      if (overlap > p.t_overlap && !(iou_bev(ab, s.box) > 0.0)) return std::nullopt;
      sum += std::hypot(s.box.x - ab.x, s.box.y - ab.y);
      sum_dy += std::abs(s.box.y - ab.y);
      ++n;
    }
    if (n == 0) return std::nullopt;
    if (sum_dy / n > p.lateral_gate) return std::nullopt;
    distance = sum / n;
  }
  const double cost = distance + dim_cost;
  if (cost > p.max_cost) return std::nullopt;
  return cost;
}

std::vector<Trajectory> stitch_tracklets(std::span<const Tracklet> tracklets,
                                         const StitchParams& params) {
  const int n = static_cast<int>(tracklets.size());
  Eigen::MatrixXd gain = Eigen::MatrixXd::Constant(n, n, -1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (const auto c = stitch_cost(tracklets[i], tracklets[j], params)) {
        gain(i, j) = params.max_cost - *c;
      }
    }
  }
  std::vector<int> next(n, -1), prev(n, -1);
  for (const auto& [i, j] : max_weight_matching(gain, 0.0)) {
    next[i] = j;
    prev[j] = i;
  }

  std::vector<Trajectory> out;
  for (int head = 0; head < n; ++head) {
    if (prev[head] != -1 || tracklets[head].samples.empty()) continue;
    Trajectory traj;
    traj.id = tracklets[head].id;
    std::set<std::string> cams;
    for (int k = head; k != -1; k = next[k]) {
      traj.members.push_back(tracklets[k].id);
      cams.insert(tracklets[k].camera);
      traj.samples.insert(traj.samples.end(), tracklets[k].samples.begin(),
                          tracklets[k].samples.end());
    }
    traj.cameras.assign(cams.begin(), cams.end());
    std::stable_sort(traj.samples.begin(), traj.samples.end(),
                     [](const TrackSample& a, const TrackSample& b) { return a.t < b.t; });

    if (traj.members.size() == 1) {
      traj.smoothed = traj.samples;
      out.push_back(std::move(traj));
      continue;
    }

    double l = 0, w = 0, h = 0;
    std::array<int, kNumClasses> votes{};
    for (const auto& s : traj.samples) {
      l += s.box.l;
      w += s.box.w;
      h += s.box.h;
      votes[static_cast<int>(s.box.cls)] += 1;
    }
    const double cnt = static_cast<double>(traj.samples.size());
    int cls = static_cast<int>(traj.samples.back().box.cls);
    for (int c = 0; c < kNumClasses; ++c) {
      if (votes[c] > votes[cls]) cls = c;
    }

    std::vector<timesync::WeightedObservation> obs;
    std::vector<double> times;
    for (const auto& s : traj.samples) {
      obs.push_back({s.t, s.box.x, s.box.y, 1.0, {}, 0});
      if (times.empty() || times.back() != s.t) times.push_back(s.t);
    }
    if (times.size() >= 4) traj.spline = timesync::fit_spline(obs);
    for (double t : times) {
      Box3D b = traj.samples.front().box;
      b.l = l / cnt;
      b.w = w / cnt;
      b.h = h / cnt;
      b.cls = static_cast<VehicleClass>(cls);
      if (traj.spline) {
        std::tie(b.x, b.y) = traj.spline->eval(t);
      } else {
        double sx = 0, sy = 0;
        int k = 0;
        for (const auto& s : traj.samples) {
          if (s.t == t) {
            sx += s.box.x;
            sy += s.box.y;
            ++k;
          }
        }
        b.x = sx / k;
        b.y = sy / k;
      }
      traj.smoothed.push_back({t, b});
    }
    out.push_back(std::move(traj));
  }
  return out;
}

}  // namespace roadtrack::tracking
