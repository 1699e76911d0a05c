#include "roadtrack/tracking/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "roadtrack/core/error.hpp"
#include "roadtrack/tracking/fusion.hpp"
#include "roadtrack/tracking/iou.hpp"

namespace roadtrack::tracking {

std::string_view to_string(TrackerKind k) { return k == TrackerKind::kKiou ? "kiou" : "byte"; }

std::string_view to_string(Fusion f) {
  switch (f) {
    case Fusion::kNone: return "none";
    case Fusion::kDf: return "df";
    case Fusion::kTf: return "tf";
    case Fusion::kDfTf: return "df+tf";
  }
  return "none";
}

TrackerKind parse_tracker_kind(std::string_view s) {
  if (s == "kiou") return TrackerKind::kKiou;
  if (s == "byte") return TrackerKind::kByte;
  fail(ErrorKind::kValidationError, "unknown tracker '" + std::string(s) + "'");
}

Fusion parse_fusion(std::string_view s) {
  if (s == "none") return Fusion::kNone;
  if (s == "df") return Fusion::kDf;
  if (s == "tf") return Fusion::kTf;
  if (s == "df+tf") return Fusion::kDfTf;
  fail(ErrorKind::kValidationError, "unknown fusion '" + std::string(s) + "'");
}

TrackerConfig TrackerConfig::from_keyvalue(const KeyValueConfig& kv) {
  kv.require_known({"tracker", "fusion", "min_iou", "byte_high", "byte_low", "df_iou", "n_init",
                    "n_miss", "rate_hz", "sync_tolerance", "kalman.q", "kalman.r",
                    "stitch.t_overlap", "stitch.t_gap_max", "stitch.lambda_dim",
                    "stitch.max_cost", "stitch.lateral_gate"});
  TrackerConfig c;
  c.tracker = parse_tracker_kind(kv.get_string("tracker", "kiou"));
  c.fusion = parse_fusion(kv.get_string("fusion", "none"));
  c.min_iou = kv.get_double("min_iou", c.min_iou);
  c.byte_high = kv.get_double("byte_high", c.byte_high);
  c.byte_low = kv.get_double("byte_low", c.byte_low);
  c.df_iou = kv.get_double("df_iou", c.df_iou);
  c.n_init = static_cast<int>(kv.get_int("n_init", c.n_init));
  c.n_miss = static_cast<int>(kv.get_int("n_miss", c.n_miss));
  c.rate_hz = kv.get_double("rate_hz", c.rate_hz);
  c.sync_tolerance = kv.get_double("sync_tolerance", c.sync_tolerance);
  const auto q = kv.get_doubles("kalman.q", {c.kalman.q.begin(), c.kalman.q.end()});
  const auto r = kv.get_doubles("kalman.r", {c.kalman.r.begin(), c.kalman.r.end()});
  if (q.size() != 4 || r.size() != 2) {
    fail(ErrorKind::kValidationError, "kalman.q needs 4 values and kalman.r needs 2");
  }
  std::copy(q.begin(), q.end(), c.kalman.q.begin());
  std::copy(r.begin(), r.end(), c.kalman.r.begin());
  c.stitch.t_overlap = kv.get_double("stitch.t_overlap", c.stitch.t_overlap);
  c.stitch.t_gap_max = kv.get_double("stitch.t_gap_max", c.stitch.t_gap_max);
  c.stitch.lambda_dim = kv.get_double("stitch.lambda_dim", c.stitch.lambda_dim);
  c.stitch.max_cost = kv.get_double("stitch.max_cost", c.stitch.max_cost);
  c.stitch.lateral_gate = kv.get_double("stitch.lateral_gate", c.stitch.lateral_gate);
  c.validate();
  return c;
}

void TrackerConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::kValidationError, what);
  };
  check(min_iou > 0.0 && min_iou <= 1.0, "min_iou must be in (0, 1]");
  check(byte_low >= 0.0 && byte_low < byte_high && byte_high <= 1.0,
        "need 0 <= byte_low < byte_high <= 1");
  check(df_iou >= 0.0 && df_iou < 1.0, "df_iou must be in [0, 1)");
  check(n_init >= 1 && n_miss >= 0, "n_init >= 1 and n_miss >= 0 required");
  check(rate_hz > 0.0 && sync_tolerance >= 0.0, "rate_hz > 0 and sync_tolerance >= 0 required");
  for (double q : kalman.q) check(q > 0.0, "kalman.q entries must be > 0");
  for (double r : kalman.r) check(r >= 0.0, "kalman.r entries must be >= 0");
  check(stitch.max_cost > 0.0 && stitch.t_gap_max >= 0.0, "invalid stitching parameters");
}

namespace {

struct History {
  double t;
  Eigen::Vector2d pos;
  bool hit;
};

struct LiveTrack {
  TrackState state;
  double t_state = 0.0;
  bool confirmed = false;
  std::vector<History> history;
};

// One independent tracker (a camera-direction pair, or a direction under DF).
class TrackerCore {
 public:
  TrackerCore(const TrackerConfig& cfg, std::string camera_label, std::int64_t* next_id)
      : cfg_(cfg), camera_(std::move(camera_label)), next_id_(next_id) {}

  void step(double tick, const std::vector<Detection>& dets) {
    for (auto& tr : live_) {
      tr.state = kalman_predict(tr.state, std::max(0.0, tick - tr.t_state), cfg_.kalman);
      tr.t_state = tick;
      tr.state.age += 1;
    }
    // Pairwise IOU with each track moved to the detection's own capture time.
    Eigen::MatrixXd iou(live_.size(), dets.size());
    for (std::size_t i = 0; i < live_.size(); ++i) {
      const Box3D base = live_[i].state.box();
      for (std::size_t j = 0; j < dets.size(); ++j) {
        Box3D b = base;
        const double dt = dets[j].t - tick;
        b.x += live_[i].state.mean[2] * dt;
        b.y += live_[i].state.mean[3] * dt;
        iou(i, j) = iou_bev(b, dets[j].box);
      }
    }
    std::vector<std::pair<int, int>> matches;
    std::vector<int> unmatched_tracks, spawn;
    if (cfg_.tracker == TrackerKind::kByte) {
      std::vector<double> conf;
      for (const auto& d : dets) conf.push_back(d.confidence);
      const ByteAssociation a =
          associate_byte_matrix(iou, conf, {cfg_.byte_high, cfg_.byte_low, cfg_.min_iou});
      matches = a.matches;
      unmatched_tracks = a.unmatched_tracks;
      spawn = a.spawn;
    } else {
      const Association a = associate_matrix(iou, cfg_.min_iou);
      matches = a.matches;
      unmatched_tracks = a.unmatched_tracks;
      spawn = a.unmatched_detections;
    }

    for (const auto& [ti, di] : matches) {
      auto& tr = live_[ti];
      Detection z = dets[di];
      const double dt = tick - z.t;
      z.box.x += tr.state.mean[2] * dt;
      z.box.y += tr.state.mean[3] * dt;
      tr.state = kalman_update(tr.state, z, cfg_.kalman);
      tr.history.push_back({tick, tr.state.mean.head<2>(), true});
      if (tr.state.hits >= cfg_.n_init) tr.confirmed = true;
    }
    std::vector<char> drop(live_.size(), 0);
    for (int ti : unmatched_tracks) {
      auto& tr = live_[ti];
      tr.state.misses += 1;
      tr.history.push_back({tick, tr.state.mean.head<2>(), false});
      if (!tr.confirmed || tr.state.misses > cfg_.n_miss) drop[ti] = 1;
    }
    std::vector<LiveTrack> kept;
    for (std::size_t i = 0; i < live_.size(); ++i) {
      if (drop[i]) {
        finish(std::move(live_[i]));
      } else {
        kept.push_back(std::move(live_[i]));
      }
    }
    live_ = std::move(kept);
    for (int di : spawn) {
      LiveTrack tr;
      tr.state = make_track(dets[di], (*next_id_)++, cfg_.kalman);
      tr.t_state = dets[di].t;
      tr.confirmed = cfg_.n_init <= 1;
      tr.history.push_back({tick, tr.state.mean.head<2>(), true});
      live_.push_back(std::move(tr));
    }
  }

  void flush() {
    for (auto& tr : live_) finish(std::move(tr));
    live_.clear();
  }

  std::vector<Tracklet>& output() { return out_; }

 private:
  void finish(LiveTrack&& tr) {
    if (!tr.confirmed) return;
    std::size_t last = tr.history.size();
    while (last > 0 && !tr.history[last - 1].hit) --last;
    if (last == 0) return;
    Tracklet t;
    t.id = tr.state.id;
    t.camera = camera_;
    const Box3D proto = tr.state.box();
    for (std::size_t k = 0; k < last; ++k) {
      Box3D b = proto;
      b.x = tr.history[k].pos.x();
      b.y = tr.history[k].pos.y();
      t.samples.push_back({tr.history[k].t, b});
    }
    out_.push_back(std::move(t));
  }

  const TrackerConfig& cfg_;
  std::string camera_;
  std::int64_t* next_id_;
  std::vector<LiveTrack> live_;
  std::vector<Tracklet> out_;
};

std::vector<Trajectory> as_trajectories(std::vector<Tracklet> tracklets, const TrackerConfig& cfg) {
  std::sort(tracklets.begin(), tracklets.end(),
            [](const Tracklet& a, const Tracklet& b) { return a.id < b.id; });
  if (uses_tf(cfg.fusion)) return stitch_tracklets(tracklets, cfg.stitch);
  std::vector<Trajectory> out;
  for (auto& t : tracklets) {
    Trajectory traj;
    traj.id = t.id;
    traj.members = {t.id};
    traj.cameras = {t.camera};
    traj.samples = t.samples;
    traj.smoothed = std::move(t.samples);
    out.push_back(std::move(traj));
  }
  return out;
}

}  // namespace

TrackingOutput track_scene(std::span<const DetectionFrame> frames, const TrackerConfig& config) {
  config.validate();
  if (frames.empty()) fail(ErrorKind::kEmptyScene, "no frames to track");

  std::map<std::string, std::vector<const DetectionFrame*>> by_camera;
  double t_first = frames[0].t, t_last = frames[0].t;
  for (const auto& f : frames) {
    by_camera[f.camera].push_back(&f);
    t_first = std::min(t_first, f.t);
    t_last = std::max(t_last, f.t);
  }
  for (auto& [cam, list] : by_camera) {
    std::stable_sort(list.begin(), list.end(),
                     [](const DetectionFrame* a, const DetectionFrame* b) { return a->t < b->t; });
  }

  std::int64_t next_id = 1;
  std::map<std::pair<std::string, Direction>, TrackerCore> cores;
  auto core_for = [&](const std::string& label, Direction d) -> TrackerCore& {
    auto key = std::make_pair(label, d);
    auto it = cores.find(key);
    if (it == cores.end()) it = cores.emplace(key, TrackerCore(config, label, &next_id)).first;
    return it->second;
  };

  const double step = 1.0 / config.rate_hz;
  const int ticks = static_cast<int>(std::floor((t_last - t_first) * config.rate_hz + 1e-9)) + 1;
  std::map<std::string, std::size_t> cursor;
  const double min_conf = config.tracker == TrackerKind::kByte ? config.byte_low : config.byte_high;

  for (int m = 0; m < ticks; ++m) {
    const double tick = t_first + step * m;
    std::map<std::pair<std::string, Direction>, std::vector<Detection>> groups;
    std::vector<Detection> pooled[2];
    for (const auto& [cam, list] : by_camera) {
      std::size_t& c = cursor[cam];
      while (c < list.size() && list[c]->t < tick - config.sync_tolerance - 1e-9) ++c;
      const DetectionFrame* best = nullptr;
      for (std::size_t k = c; k < list.size() && list[k]->t <= tick + config.sync_tolerance + 1e-9;
           ++k) {
        if (!best || std::abs(list[k]->t - tick) < std::abs(best->t - tick)) best = list[k];
      }
      if (!best) continue;
      for (Detection d : best->detections) {
        if (d.confidence < min_conf) continue;
        d.t = best->t;
        if (d.camera.empty()) d.camera = cam;
        if (uses_df(config.fusion)) {
          pooled[static_cast<int>(d.box.direction)].push_back(d);
        } else {
          groups[{cam, d.box.direction}].push_back(d);
        }
      }
    }
    if (uses_df(config.fusion)) {
      for (int d = 0; d < 2; ++d) {
        groups[{"fused", static_cast<Direction>(d)}] = fuse_detections(pooled[d], config.df_iou);
      }
    }
    // Trackers without detections this tick still advance.
    for (auto& [key, core] : cores) groups.try_emplace(key);
    for (auto& [key, dets] : groups) core_for(key.first, key.second).step(tick, dets);
  }

  std::vector<Tracklet> tracklets;
  for (auto& [key, core] : cores) {
    core.flush();
    for (auto& t : core.output()) tracklets.push_back(std::move(t));
  }
  TrackingOutput out;
  out.ticks = ticks;
  out.trajectories = as_trajectories(std::move(tracklets), config);
  return out;
}

std::vector<Trajectory> trajectories_from_tracklets(std::vector<Tracklet> tracklets,
                                                    const TrackerConfig& config) {
  return as_trajectories(std::move(tracklets), config);
}

}  // namespace roadtrack::tracking
