#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "roadtrack/core/keyvalue.hpp"
#include "roadtrack/core/types.hpp"

namespace roadtrack::simulator {

enum class TrafficRegime { kFreeFlow, kSlow, kCongested };

std::string_view to_string(TrafficRegime r);
TrafficRegime parse_regime(std::string_view s);  // ValidationError

/// A vehicle hidden from one camera (or all cameras when camera is empty)
/// for a run of frame indices.
struct OcclusionWindow {
  ObjectId vehicle = 0;
  std::string camera;
  std::int64_t start_frame = 0;
  std::int64_t frames = 0;
};

struct NoiseConfig {
  double position_sigma = 0.3;  // ft
  double dimension_sigma = 0.3;
  double fn_base = 0.02;      // drop probability for the lane next to the cameras
  double fn_per_lane = 0.01;  // added per lane of distance from the cameras
  double p_fp = 0.05;         // false positive boxes per frame (Bernoulli)
  double occlusion_rate = 0.0;  // chance that a (vehicle, camera) gets one window
  int min_occlusion_frames = 10;
  int max_occlusion_frames = 150;
  double true_confidence_min = 0.2;  // true boxes: U(min, 1)
  double fp_confidence_max = 0.5;    // false positives: U(0.01, max)
  double pixel_nms = 0.4;
  double road_nms = 0.01;
  std::vector<OcclusionWindow> scripted_occlusions;

  static NoiseConfig none();
  bool is_zero() const;
  void validate() const;
};

struct SceneConfig {
  std::string name = "scene";
  std::uint64_t seed = 42;
  double duration = 60.0;  // s
  int lanes_per_direction = 4;
  double lane_width = 12.0;
  double roadway_length = 2000.0;
  int vehicle_count = 40;  // both directions together
  TrafficRegime regime = TrafficRegime::kFreeFlow;
  bool constant_velocity = false;
  std::array<double, 6> class_mix{0.30, 0.35, 0.08, 0.12, 0.08, 0.07};  // VehicleClass order

  // Cameras.
  int camera_count = 16;
  double fov_length = 250.0;
  double pole_height = 110.0;
  double pole_setback = 20.0;  // from the outer road edge
  double curvature = 1e-4;     // 1/ft, lateral bend of the real road
  double epoch_base = 1.6e9;   // s, added to every reported timestamp

  // Timestamp corruption.
  double offset_spread = 0.0;  // offsets ~ U(-spread, spread); the first camera is the reference
  bool random_phase = true;
  double p_skip = 0.0;
  double p_double = 0.0;
  std::vector<std::pair<std::string, std::int64_t>> forced_skips;    // (camera, capture index)
  std::vector<std::pair<std::string, std::int64_t>> forced_doubles;  // (camera, capture index)

  // Hand annotation.
  double annotation_pixel_sigma = 0.5;
  double click_sigma = 0.5;  // survey points

  NoiseConfig noise;

  static SceneConfig preset(TrafficRegime regime);
  static SceneConfig from_keyvalue(const KeyValueConfig& kv);
  KeyValueConfig to_keyvalue() const;
  void validate() const;
};

}  // namespace roadtrack::simulator
