#include "roadtrack/simulator/config.hpp"

#include <fmt/format.h>

#include "roadtrack/core/error.hpp"

namespace roadtrack::simulator {

std::string_view to_string(TrafficRegime r) {
  switch (r) {
    case TrafficRegime::kFreeFlow:
      return "free_flow";
    case TrafficRegime::kSlow:
      return "slow";
    case TrafficRegime::kCongested:
      return "congested";
  }
  return "?";
}

TrafficRegime parse_regime(std::string_view s) {
  if (s == "free_flow") return TrafficRegime::kFreeFlow;
  if (s == "slow") return TrafficRegime::kSlow;
  if (s == "congested") return TrafficRegime::kCongested;
  fail(ErrorKind::kValidationError, fmt::format("unknown traffic regime '{}'", s));
}

NoiseConfig NoiseConfig::none() {
  NoiseConfig n;
  n.position_sigma = 0.0;
  n.dimension_sigma = 0.0;
  n.fn_base = 0.0;
  n.fn_per_lane = 0.0;
  n.p_fp = 0.0;
  n.occlusion_rate = 0.0;
  return n;
}

bool NoiseConfig::is_zero() const {
  return position_sigma == 0.0 && dimension_sigma == 0.0 && fn_base == 0.0 && fn_per_lane == 0.0 &&
         p_fp == 0.0 && occlusion_rate == 0.0 && scripted_occlusions.empty();
}

void NoiseConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorKind::kValidationError, fmt::format("{} must be in [0, 1]", name));
    }
  };
  prob(fn_base, "fn_base");
  prob(fn_per_lane, "fn_per_lane");
  prob(p_fp, "p_fp");
  prob(occlusion_rate, "occlusion_rate");
  prob(true_confidence_min, "true_confidence_min");
  prob(fp_confidence_max, "fp_confidence_max");
  prob(pixel_nms, "pixel_nms");
  prob(road_nms, "road_nms");
  if (!(position_sigma >= 0.0) || !(dimension_sigma >= 0.0)) {
    fail(ErrorKind::kValidationError, "noise sigmas must be >= 0");
  }
  if (min_occlusion_frames < 1 || max_occlusion_frames < min_occlusion_frames) {
    fail(ErrorKind::kValidationError, "occlusion window bounds must satisfy 1 <= min <= max");
  }
  for (const auto& w : scripted_occlusions) {
    if (w.frames < 0) fail(ErrorKind::kValidationError, "occlusion window length must be >= 0");
  }
}

SceneConfig SceneConfig::preset(TrafficRegime regime) {
  SceneConfig c;
  c.regime = regime;
  c.name = std::string(to_string(regime));
  switch (regime) {
    case TrafficRegime::kFreeFlow:
      c.vehicle_count = 40;
      break;
    case TrafficRegime::kSlow:
      c.vehicle_count = 48;
      break;
    case TrafficRegime::kCongested:
      c.vehicle_count = 64;
      c.noise.occlusion_rate = 0.3;
      break;
  }
  return c;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "name", "seed", "duration", "lanes_per_direction", "lane_width", "roadway_length",
    "vehicle_count", "regime", "constant_velocity", "class_mix", "camera_count", "fov_length",
    "pole_height", "pole_setback", "curvature", "epoch_base", "offset_spread", "random_phase",
    "p_skip", "p_double", "forced_skips", "forced_doubles", "annotation_pixel_sigma",
    "click_sigma", "noise.position_sigma", "noise.dimension_sigma", "noise.fn_base",
    "noise.fn_per_lane", "noise.p_fp", "noise.occlusion_rate", "noise.min_occlusion_frames",
    "noise.max_occlusion_frames", "noise.true_confidence_min", "noise.fp_confidence_max",
    "noise.pixel_nms", "noise.road_nms", "noise.scripted_occlusions"};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t to_int(const std::string& s, const char* key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::kValidationError, fmt::format("{}: '{}' is not an integer", key, s));
}

// "camera:index,camera:index"
std::vector<std::pair<std::string, std::int64_t>> parse_events(const std::string& s, const char* key) {
  std::vector<std::pair<std::string, std::int64_t>> out;
  for (const auto& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) fail(ErrorKind::kValidationError, fmt::format("{}: bad entry '{}'", key, item));
    out.emplace_back(parts[0], to_int(parts[1], key));
  }
  return out;
}

std::string format_events(const std::vector<std::pair<std::string, std::int64_t>>& ev) {
  std::string s;
  for (const auto& [cam, idx] : ev) s += fmt::format("{}{}:{}", s.empty() ? "" : ",", cam, idx);
  return s;
}

// "vehicle:camera:start:frames;...", camera may be empty.
std::vector<OcclusionWindow> parse_windows(const std::string& s) {
  std::vector<OcclusionWindow> out;
  for (const auto& item : split(s, ';')) {
    const auto parts = split(item, ':');
    if (parts.size() != 4) {
      fail(ErrorKind::kValidationError, fmt::format("noise.scripted_occlusions: bad entry '{}'", item));
    }
    const char* key = "noise.scripted_occlusions";
    out.push_back({to_int(parts[0], key), parts[1], to_int(parts[2], key), to_int(parts[3], key)});
  }
  return out;
}

std::string format_windows(const std::vector<OcclusionWindow>& ws) {
  std::string s;
  for (const auto& w : ws) {
    s += fmt::format("{}{}:{}:{}:{}", s.empty() ? "" : ";", w.vehicle, w.camera, w.start_frame, w.frames);
  }
  return s;
}

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

SceneConfig SceneConfig::from_keyvalue(const KeyValueConfig& kv) {
  kv.require_known(kKnownKeys);
  SceneConfig c = preset(parse_regime(kv.get_string("regime", "free_flow")));
  c.name = kv.get_string("name", c.name);
  c.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long long>(c.seed)));
  c.duration = kv.get_double("duration", c.duration);
  c.lanes_per_direction = static_cast<int>(kv.get_int("lanes_per_direction", c.lanes_per_direction));
  c.lane_width = kv.get_double("lane_width", c.lane_width);
  c.roadway_length = kv.get_double("roadway_length", c.roadway_length);
  c.vehicle_count = static_cast<int>(kv.get_int("vehicle_count", c.vehicle_count));
  c.constant_velocity = kv.get_bool("constant_velocity", c.constant_velocity);
  if (kv.has("class_mix")) {
    const auto mix = kv.get_doubles("class_mix", {});
    if (mix.size() != 6) fail(ErrorKind::kValidationError, "class_mix needs 6 weights");
    std::copy(mix.begin(), mix.end(), c.class_mix.begin());
  }
  c.camera_count = static_cast<int>(kv.get_int("camera_count", c.camera_count));
  c.fov_length = kv.get_double("fov_length", c.fov_length);
  c.pole_height = kv.get_double("pole_height", c.pole_height);
  c.pole_setback = kv.get_double("pole_setback", c.pole_setback);
  c.curvature = kv.get_double("curvature", c.curvature);
  c.epoch_base = kv.get_double("epoch_base", c.epoch_base);
  c.offset_spread = kv.get_double("offset_spread", c.offset_spread);
  c.random_phase = kv.get_bool("random_phase", c.random_phase);
  c.p_skip = kv.get_double("p_skip", c.p_skip);
  c.p_double = kv.get_double("p_double", c.p_double);
  c.forced_skips = parse_events(kv.get_string("forced_skips", ""), "forced_skips");
  c.forced_doubles = parse_events(kv.get_string("forced_doubles", ""), "forced_doubles");
  c.annotation_pixel_sigma = kv.get_double("annotation_pixel_sigma", c.annotation_pixel_sigma);
  c.click_sigma = kv.get_double("click_sigma", c.click_sigma);
  NoiseConfig& n = c.noise;
  n.position_sigma = kv.get_double("noise.position_sigma", n.position_sigma);
  n.dimension_sigma = kv.get_double("noise.dimension_sigma", n.dimension_sigma);
  n.fn_base = kv.get_double("noise.fn_base", n.fn_base);
  n.fn_per_lane = kv.get_double("noise.fn_per_lane", n.fn_per_lane);
  n.p_fp = kv.get_double("noise.p_fp", n.p_fp);
  n.occlusion_rate = kv.get_double("noise.occlusion_rate", n.occlusion_rate);
  n.min_occlusion_frames = static_cast<int>(kv.get_int("noise.min_occlusion_frames", n.min_occlusion_frames));
  n.max_occlusion_frames = static_cast<int>(kv.get_int("noise.max_occlusion_frames", n.max_occlusion_frames));
  n.true_confidence_min = kv.get_double("noise.true_confidence_min", n.true_confidence_min);
  n.fp_confidence_max = kv.get_double("noise.fp_confidence_max", n.fp_confidence_max);
  n.pixel_nms = kv.get_double("noise.pixel_nms", n.pixel_nms);
  n.road_nms = kv.get_double("noise.road_nms", n.road_nms);
  n.scripted_occlusions = parse_windows(kv.get_string("noise.scripted_occlusions", ""));
  c.validate();
  return c;
}

KeyValueConfig SceneConfig::to_keyvalue() const {
  KeyValueConfig kv;
  kv.set("name", name);
  kv.set("seed", std::to_string(seed));
  kv.set("duration", num(duration));
  kv.set("lanes_per_direction", std::to_string(lanes_per_direction));
  kv.set("lane_width", num(lane_width));
  kv.set("roadway_length", num(roadway_length));
  kv.set("vehicle_count", std::to_string(vehicle_count));
  kv.set("regime", std::string(to_string(regime)));
  kv.set("constant_velocity", constant_velocity ? "true" : "false");
  kv.set("class_mix", fmt::format("{},{},{},{},{},{}", class_mix[0], class_mix[1], class_mix[2],
                                  class_mix[3], class_mix[4], class_mix[5]));
  kv.set("camera_count", std::to_string(camera_count));
  kv.set("fov_length", num(fov_length));
  kv.set("pole_height", num(pole_height));
  kv.set("pole_setback", num(pole_setback));
  kv.set("curvature", num(curvature));
  kv.set("epoch_base", num(epoch_base));
  kv.set("offset_spread", num(offset_spread));
  kv.set("random_phase", random_phase ? "true" : "false");
  kv.set("p_skip", num(p_skip));
  kv.set("p_double", num(p_double));
  kv.set("forced_skips", format_events(forced_skips));
  kv.set("forced_doubles", format_events(forced_doubles));
  kv.set("annotation_pixel_sigma", num(annotation_pixel_sigma));
  kv.set("click_sigma", num(click_sigma));
  kv.set("noise.position_sigma", num(noise.position_sigma));
  kv.set("noise.dimension_sigma", num(noise.dimension_sigma));
  kv.set("noise.fn_base", num(noise.fn_base));
  kv.set("noise.fn_per_lane", num(noise.fn_per_lane));
  kv.set("noise.p_fp", num(noise.p_fp));
  kv.set("noise.occlusion_rate", num(noise.occlusion_rate));
  kv.set("noise.min_occlusion_frames", std::to_string(noise.min_occlusion_frames));
  kv.set("noise.max_occlusion_frames", std::to_string(noise.max_occlusion_frames));
  kv.set("noise.true_confidence_min", num(noise.true_confidence_min));
  kv.set("noise.fp_confidence_max", num(noise.fp_confidence_max));
  kv.set("noise.pixel_nms", num(noise.pixel_nms));
  kv.set("noise.road_nms", num(noise.road_nms));
  kv.set("noise.scripted_occlusions", format_windows(noise.scripted_occlusions));
  return kv;
}

void SceneConfig::validate() const {
  if (!(duration > 0.0)) fail(ErrorKind::kValidationError, "duration must be > 0");
  if (lanes_per_direction < 1 || vehicle_count < 1 || camera_count < 1) {
    fail(ErrorKind::kValidationError, "lane, vehicle and camera counts must be >= 1");
  }
  if (!(lane_width > 0.0) || !(roadway_length > 0.0) || !(fov_length > 0.0) ||
      !(pole_height > 0.0)) {
    fail(ErrorKind::kValidationError, "lengths must be > 0");
  }
  if (fov_length > roadway_length) fail(ErrorKind::kValidationError, "fov_length exceeds the roadway");
  if (camera_count > 1 && (roadway_length - fov_length) / (camera_count - 1) >= fov_length) {
    fail(ErrorKind::kValidationError, "adjacent camera fields of view do not overlap");
  }
  if (camera_count == 1 && fov_length < roadway_length) {
    fail(ErrorKind::kValidationError, "a single camera must see the whole roadway");
  }
  if (!(p_skip >= 0.0 && p_skip <= 1.0) || !(p_double >= 0.0 && p_double <= 1.0)) {
    fail(ErrorKind::kValidationError, "p_skip and p_double must be in [0, 1]");
  }
  if (!(offset_spread >= 0.0) || !(annotation_pixel_sigma >= 0.0) || !(click_sigma >= 0.0)) {
    fail(ErrorKind::kValidationError, "spreads and sigmas must be >= 0");
  }
  double total = 0.0;
  for (double w : class_mix) {
    if (!(w >= 0.0)) fail(ErrorKind::kValidationError, "class_mix weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) fail(ErrorKind::kValidationError, "class_mix must have a positive weight");
  noise.validate();
}

}  // namespace roadtrack::simulator
