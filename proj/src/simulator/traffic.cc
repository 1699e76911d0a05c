#include "roadtrack/simulator/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "roadtrack/core/error.hpp"
#include "roadtrack/core/rng.hpp"

namespace roadtrack::simulator {

namespace {

constexpr std::uint64_t kTrafficStream = 1;

double eval_pos(const JerkSegment& s, double t) {
  const double d = t - s.t0;
  return s.s0 + d * (s.v0 + d * (s.a0 / 2.0 + d * (s.jerk / 6.0)));
}
double eval_vel(const JerkSegment& s, double t) {
  const double d = t - s.t0;
  return s.v0 + d * (s.a0 + d * (s.jerk / 2.0));
}
double eval_acc(const JerkSegment& s, double t) { return s.a0 + (t - s.t0) * s.jerk; }

// Appends segments to `segs`, continuing from the state at time t.
class ProfileBuilder {
 public:
  ProfileBuilder(double t, double v) : t_(t), s_(0.0), v_(v) {}

  void cruise(double duration) { push(0.0, duration); }

  // S-curve to v1: two constant-jerk halves, acceleration back to 0 at the end.
  void change_speed(double v1, double duration) {
    const double jerk = 4.0 * (v1 - v_) / (duration * duration);
    push(jerk, duration / 2.0);
    push(-jerk, duration / 2.0);
    v_ = v1;  // removes rounding drift
    a_ = 0.0;
  }

  double t() const { return t_; }
  double v() const { return v_; }
  std::vector<JerkSegment> take() { return std::move(segs_); }

 private:
  void push(double jerk, double duration) {
    JerkSegment seg{t_, s_, v_, a_, jerk};
    segs_.push_back(seg);
    t_ += duration;
    s_ = eval_pos(seg, t_);
    v_ = eval_vel(seg, t_);
    a_ = eval_acc(seg, t_);
  }

  double t_, s_, v_, a_ = 0.0;
  std::vector<JerkSegment> segs_;
};

struct SpeedBand {
  double lo, hi, max_accel;
};

SpeedBand band_for(TrafficRegime r) {
  switch (r) {
    case TrafficRegime::kFreeFlow:
      return {90.0, 110.0, 2.0};
    case TrafficRegime::kSlow:
      return {40.0, 60.0, 2.5};
    case TrafficRegime::kCongested:
      return {25.0, 40.0, 5.0};
  }
  return {90.0, 110.0, 2.0};
}

MotionProfile lane_profile(Rng& rng, const SceneConfig& cfg, double t_start, double t_end) {
  const SpeedBand band = band_for(cfg.regime);
  ProfileBuilder b(t_start, rng.uniform(band.lo, band.hi));
  if (cfg.constant_velocity) {
    b.cruise(t_end - t_start + 1.0);
    return MotionProfile(b.take());
  }
  auto transition = [&](double v1) {
    const double dv = std::abs(v1 - b.v());
    b.change_speed(v1, std::max(2.0, 2.0 * dv / band.max_accel));
  };
  if (cfg.regime == TrafficRegime::kCongested) {
    // Stop and go: move, brake to a full stop, wait, pull away.
    while (b.t() < t_end) {
      b.cruise(rng.uniform(3.0, 8.0));
      transition(0.0);
      b.cruise(rng.uniform(2.0, 6.0));
      transition(rng.uniform(band.lo, band.hi));
    }
  } else {
    while (b.t() < t_end) {
      b.cruise(rng.uniform(3.0, 10.0));
      transition(rng.uniform(band.lo, band.hi));
    }
  }
  b.cruise(1.0);
  return MotionProfile(b.take());
}

}  // namespace

MotionProfile::MotionProfile(std::vector<JerkSegment> segments) : segments_(std::move(segments)) {}

const JerkSegment& MotionProfile::segment(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const JerkSegment& s) { return v < s.t0; });
  if (it == segments_.begin()) return segments_.front();
  return *(it - 1);
}

double MotionProfile::position(double t) const { return eval_pos(segment(t), t); }
double MotionProfile::speed(double t) const { return eval_vel(segment(t), t); }
double MotionProfile::acceleration(double t) const { return eval_acc(segment(t), t); }

Box3D VehicleTruth::box(double t, double roadway_length) const {
  const double s = travelled(t);
  const double x = direction == Direction::kEB ? s : roadway_length - s;
  return Box3D{x, y, l, w, h, direction, cls};
}

std::vector<const VehicleTruth*> SceneTruth::visible(double t, double x0, double x1) const {
  std::vector<const VehicleTruth*> out;
  for (const auto& v : vehicles) {
    const Footprint f = footprint(v.box(t, config.roadway_length));
    if (f.x1 >= x0 && f.x0 <= x1) out.push_back(&v);
  }
  return out;
}

std::array<double, 3> class_dimensions(VehicleClass c) {
  switch (c) {
    case VehicleClass::kSedan:
      return {15.5, 6.0, 4.8};
    case VehicleClass::kMidsize:
      return {15.5, 6.2, 5.6};
    case VehicleClass::kVan:
      return {19.0, 6.7, 7.5};
    case VehicleClass::kPickup:
      return {19.0, 6.6, 6.2};
    case VehicleClass::kSemi:
      return {72.0, 8.5, 13.5};
    case VehicleClass::kTruck:
      return {24.0, 7.7, 10.0};
  }
  return {15.0, 6.0, 5.0};
}

SceneTruth generate_scene(const SceneConfig& config) {
  config.validate();
  Rng rng(derive_seed(config.seed, kTrafficStream));
  SceneTruth truth;
  truth.config = config;
  const double L = config.roadway_length;
  const int lanes = config.lanes_per_direction;
  const std::vector<double> mix(config.class_mix.begin(), config.class_mix.end());

  // Lane assignment, then per-lane platoons.
  std::map<std::pair<int, int>, int> per_lane;  // (direction, lane) -> count
  for (int i = 0; i < config.vehicle_count; ++i) per_lane[{i % 2, rng.uniform_int(1, lanes)}] += 1;

  const bool congested = config.regime == TrafficRegime::kCongested;
  ObjectId next_id = 1;
  for (const auto& [key, count] : per_lane) {
    const auto [dir_ix, lane] = key;
    struct Draft {
      VehicleClass cls;
      double l, w, h, delay, spacing;
    };
    std::vector<Draft> drafts;
    double delay = 0.0, spacing = 0.0;
    for (int n = 0; n < count; ++n) {
      const auto cls = static_cast<VehicleClass>(rng.categorical(mix));
      const auto nominal = class_dimensions(cls);
      Draft d{cls, nominal[0] * (1.0 + 0.03 * std::clamp(rng.normal(), -2.0, 2.0)),
              nominal[1] * (1.0 + 0.03 * std::clamp(rng.normal(), -2.0, 2.0)),
              nominal[2] * (1.0 + 0.03 * std::clamp(rng.normal(), -2.0, 2.0)), 0.0, 0.0};
      if (n > 0) {
        delay += 1.0 + rng.exponential(congested ? 0.5 : 1.0);
        spacing += d.l + rng.uniform(6.0, 20.0);
      }
      d.delay = delay;
      d.spacing = spacing;
      drafts.push_back(d);
    }
    const double t_start = -delay - 1.0;
    MotionProfile profile = lane_profile(rng, config, t_start, config.duration);
    // Shift so that the lane leader's rear is at a random point of the road at t = 0.
    const double leader_start = rng.uniform(0.5 * L, L);
    std::vector<JerkSegment> segs = profile.segments();
    const double shift = leader_start - profile.position(0.0);
    for (auto& s : segs) s.s0 += shift;
    auto shared = std::make_shared<const MotionProfile>(std::move(segs));

    for (const Draft& d : drafts) {
      VehicleTruth v;
      v.id = next_id++;
      v.cls = d.cls;
      v.direction = dir_ix == 0 ? Direction::kEB : Direction::kWB;
      v.lane = lane;
      v.y = direction_sign(v.direction) * (lane - 0.5) * config.lane_width;
      v.l = d.l;
      v.w = d.w;
      v.h = d.h;
      v.delay = d.delay;
      v.spacing = d.spacing;
      v.profile = shared;
      if (v.travelled(config.duration) + v.l < 0.0) {
        fail(ErrorKind::kInfeasibleDensity,
             fmt::format("{} vehicles in {} lane {} cannot all enter within {} s", count,
                         to_string(v.direction), lane, config.duration));
      }
      truth.vehicles.push_back(std::move(v));
    }
  }
  return truth;
}

}  // namespace roadtrack::simulator
