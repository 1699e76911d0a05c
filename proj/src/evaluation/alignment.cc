#include "roadtrack/evaluation/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include <spdlog/spdlog.h>

#include "roadtrack/core/error.hpp"
#include "roadtrack/timesync/spline.hpp"
#include "roadtrack/tracking/iou.hpp"

namespace roadtrack::evaluation {

std::vector<double> EvalConfig::default_hota_thresholds() {
  std::vector<double> t;
  for (int i = 1; i <= 19; ++i) t.push_back(0.05 * i);
  return t;
}

EvalConfig EvalConfig::from_keyvalue(const KeyValueConfig& kv) {
  kv.require_known({"iou_threshold", "resample_rate", "hota_thresholds", "clip_to_matched_window"});
  EvalConfig c;
  c.iou_threshold = kv.get_double("iou_threshold", c.iou_threshold);
  c.resample_rate = kv.get_double("resample_rate", c.resample_rate);
  c.hota_thresholds = kv.get_doubles("hota_thresholds", c.hota_thresholds);
  c.clip_to_matched_window = kv.get_bool("clip_to_matched_window", c.clip_to_matched_window);
  c.validate();
  return c;
}

void EvalConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    fail(ErrorKind::kValidationError, "iou_threshold must be in (0, 1)");
  }
  if (!(resample_rate > 0.0)) fail(ErrorKind::kValidationError, "resample_rate must be > 0");
  for (std::size_t i = 0; i < hota_thresholds.size(); ++i) {
    const double a = hota_thresholds[i];
    if (!(a > 0.0 && a < 1.0) || (i > 0 && !(a > hota_thresholds[i - 1]))) {
      fail(ErrorKind::kValidationError, "hota thresholds must be in (0, 1) and increasing");
    }
  }
}

namespace {

constexpr double kTickSlack = 1e-6;

long first_tick(double t, double rate, double origin) {
  return static_cast<long>(std::ceil((t - origin) * rate - kTickSlack));
}
long last_tick(double t, double rate, double origin) {
  return static_cast<long>(std::floor((t - origin) * rate + kTickSlack));
}

std::vector<TrackSample> sorted(const ObjectTrack& o) {
  std::vector<TrackSample> s = o.samples;
  std::stable_sort(s.begin(), s.end(),
                   [](const TrackSample& a, const TrackSample& b) { return a.t < b.t; });
  return s;
}

// Repeated times are averaged so interpolation is well defined.
std::vector<TrackSample> collapse(const std::vector<TrackSample>& s) {
  std::vector<TrackSample> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    double sx = 0, sy = 0;
    while (j < s.size() && s[j].t == s[i].t) {
      sx += s[j].box.x;
      sy += s[j].box.y;
      ++j;
    }
    TrackSample m = s[i];
    m.box.x = sx / static_cast<double>(j - i);
    m.box.y = sy / static_cast<double>(j - i);
    out.push_back(m);
    i = j;
  }
  return out;
}

std::pair<double, double> lerp_at(const std::vector<TrackSample>& s, double t) {
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const TrackSample& a, double v) { return a.t < v; });
  if (it == s.begin()) return {s.front().box.x, s.front().box.y};
  if (it == s.end()) return {s.back().box.x, s.back().box.y};
  if (it->t == t) return {it->box.x, it->box.y};
  const auto& p = *(it - 1);
  const double f = (t - p.t) / (it->t - p.t);
  return {p.box.x + f * (it->box.x - p.box.x), p.box.y + f * (it->box.y - p.box.y)};
}

Box3D mean_box(const std::vector<TrackSample>& s) {
  Box3D b = s.back().box;
  double l = 0, w = 0, h = 0;
  std::array<int, kNumClasses> votes{};
  for (const auto& x : s) {
    l += x.box.l;
    w += x.box.w;
    h += x.box.h;
    votes[static_cast<int>(x.box.cls)] += 1;
  }
  const double n = static_cast<double>(s.size());
  b.l = l / n;
  b.w = w / n;
  b.h = h / n;
  int cls = static_cast<int>(b.cls);
  for (int c = 0; c < kNumClasses; ++c) {
    if (votes[c] > votes[cls]) cls = c;
  }
  b.cls = static_cast<VehicleClass>(cls);
  return b;
}

}  // namespace

std::vector<TrackSample> resample_ground_truth(const ObjectTrack& gt, double rate, double origin) {
  std::vector<TrackSample> out;
  if (gt.samples.empty()) return out;
  const auto s = sorted(gt);
  const auto c = collapse(s);
  const Box3D proto = mean_box(s);
  std::optional<timesync::TrajectorySpline> spline;
  if (c.size() >= 4) {
    std::vector<timesync::WeightedObservation> obs;
    for (const auto& x : s) obs.push_back({x.t, x.box.x, x.box.y, 1.0, {}, 0});
    spline = timesync::fit_spline(obs);
  } else {
    spdlog::debug("object {} has {} distinct annotation times; linear passthrough", gt.id, c.size());
  }
  const long k0 = first_tick(c.front().t, rate, origin);
  const long k1 = last_tick(c.back().t, rate, origin);
  for (long k = k0; k <= k1; ++k) {
    const double t = origin + static_cast<double>(k) / rate;
    Box3D b = proto;
    if (spline) {
      std::tie(b.x, b.y) = spline->eval(std::clamp(t, spline->t_min(), spline->t_max()));
    } else {
      std::tie(b.x, b.y) = lerp_at(c, t);
    }
    out.push_back({t, b});
  }
  return out;
}

std::vector<TrackSample> resample_prediction(const ObjectTrack& pred, double rate, double origin) {
  std::vector<TrackSample> out;
  if (pred.samples.empty()) return out;
  const auto c = collapse(sorted(pred));
  const long k0 = first_tick(c.front().t, rate, origin);
  const long k1 = last_tick(c.back().t, rate, origin);
  for (long k = k0; k <= k1; ++k) {
    const double t = origin + static_cast<double>(k) / rate;
    auto it = std::lower_bound(c.begin(), c.end(), t,
                               [](const TrackSample& a, double v) { return a.t < v; });
    const TrackSample& ref = it == c.end() ? c.back() : *it;
    Box3D b = ref.box;
    std::tie(b.x, b.y) = lerp_at(c, t);
    out.push_back({t, b});
  }
  return out;
}

AlignedSequence align(std::span<const ObjectTrack> gt, std::span<const ObjectTrack> pred,
                      const EvalConfig& config) {
  config.validate();
  const double rate = config.resample_rate;
  double origin = std::numeric_limits<double>::infinity();
  for (const auto& o : gt) {
    for (const auto& s : o.samples) origin = std::min(origin, s.t);
  }
  for (const auto& o : pred) {
    for (const auto& s : o.samples) origin = std::min(origin, s.t);
  }
  if (!std::isfinite(origin)) return {};

  struct Series {
    ObjectId id;
    std::map<long, Box3D> at;  // tick -> box
  };
  auto to_series = [&](const ObjectTrack& o, bool is_gt) {
    Series s{o.id, {}};
    const auto samples =
        is_gt ? resample_ground_truth(o, rate, origin) : resample_prediction(o, rate, origin);
    for (const auto& x : samples) {
      s.at[static_cast<long>(std::llround((x.t - origin) * rate))] = x.box;
    }
    return s;
  };
  std::vector<Series> g, p;
  for (const auto& o : gt) {
    if (!o.samples.empty()) g.push_back(to_series(o, true));
  }
  for (const auto& o : pred) {
    if (!o.samples.empty()) p.push_back(to_series(o, false));
  }

  auto span_of = [](const std::vector<Series>& v) {
    long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
    for (const auto& s : v) {
      if (s.at.empty()) continue;
      lo = std::min(lo, s.at.begin()->first);
      hi = std::max(hi, s.at.rbegin()->first);
    }
    return std::pair{lo, hi};
  };
  const auto [g_lo, g_hi] = span_of(g);
  const auto [p_lo, p_hi] = span_of(p);

  // Which predictions ever reach the threshold with each GT object.
  std::vector<std::vector<char>> matched_with(g.size(), std::vector<char>(p.size(), 0));
  if (config.clip_to_matched_window && !p.empty()) {
    std::map<long, std::pair<std::vector<int>, std::vector<int>>> by_tick;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (const auto& [k, box] : g[i].at) by_tick[k].first.push_back(static_cast<int>(i));
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      for (const auto& [k, box] : p[j].at) {
        auto it = by_tick.find(k);
        if (it != by_tick.end()) it->second.second.push_back(static_cast<int>(j));
      }
    }
    for (const auto& [k, idx] : by_tick) {
      if (idx.first.empty() || idx.second.empty()) continue;
      std::vector<Box3D> gb, pb;
      for (int i : idx.first) gb.push_back(g[i].at.at(k));
      for (int j : idx.second) pb.push_back(p[j].at.at(k));
      const Eigen::MatrixXd iou = tracking::iou_matrix(gb, pb);
      for (std::size_t a = 0; a < idx.first.size(); ++a) {
        for (std::size_t b = 0; b < idx.second.size(); ++b) {
          if (iou(a, b) >= config.iou_threshold) matched_with[idx.first[a]][idx.second[b]] = 1;
        }
      }
    }
  }

  // Per-GT evaluation window.
  std::vector<std::pair<long, long>> window(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].at.empty()) continue;
    long lo = g[i].at.begin()->first, hi = g[i].at.rbegin()->first;
    if (!p.empty()) {
      long m_lo = std::numeric_limits<long>::max(), m_hi = std::numeric_limits<long>::min();
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (!matched_with[i][j]) continue;
        m_lo = std::min(m_lo, p[j].at.begin()->first);
        m_hi = std::max(m_hi, p[j].at.rbegin()->first);
      }
      if (m_lo <= m_hi) {
        lo = std::max(lo, m_lo);
        hi = std::min(hi, m_hi);
      } else {
        lo = std::max(lo, p_lo);
        hi = std::min(hi, p_hi);
      }
    }
    window[i] = {lo, hi};
  }

  std::map<long, AlignedFrame> frames;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const auto& [k, box] : g[i].at) {
      if (k < window[i].first || k > window[i].second) continue;
      auto& f = frames[k];
      f.gt_ids.push_back(g[i].id);
      f.gt.push_back(box);
    }
  }
  for (const auto& q : p) {
    for (const auto& [k, box] : q.at) {
      if (!g.empty() && (k < g_lo || k > g_hi)) continue;
      auto& f = frames[k];
      f.pred_ids.push_back(q.id);
      f.pred.push_back(box);
    }
  }
  AlignedSequence out;
  out.reserve(frames.size());
  for (auto& [k, f] : frames) {
    f.t = origin + static_cast<double>(k) / rate;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace roadtrack::evaluation
