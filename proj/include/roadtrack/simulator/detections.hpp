#pragma once

#include <cstdint>
#include <vector>

#include "roadtrack/simulator/render.hpp"

namespace roadtrack::simulator {

struct SimDetection {
  ObjectId source = 0;  // vehicle id, or -1 for a false positive
  Box3D box;
  double confidence = 1.0;
};

struct DetectionFrameOut {
  std::int64_t frame_index = 0;
  double t_raw = 0.0;
  std::vector<SimDetection> detections;
};

/// Per (vehicle, camera) occlusion windows drawn from the noise model, plus
/// the scripted ones that apply to this camera.
std::vector<OcclusionWindow> occlusion_windows(const SceneConfig& cfg, const SimCamera& cam,
                                               const std::vector<RenderedFrame>& frames);

/// Detector stand-in: occlusion windows, lane-dependent misses, Gaussian
/// position and size noise, false positives, then pixel NMS (true camera,
/// enclosing rectangles of the projected corners) and road-plane NMS. With
/// a zero noise model every true box comes out unchanged with confidence 1
/// and NMS is skipped.
std::vector<DetectionFrameOut> corrupt_detections(const SceneConfig& cfg, const SimCamera& cam,
                                                  const std::vector<RenderedFrame>& frames);

/// Lanes between a box and the camera side of the road (0 = nearest lane).
int lane_distance_from_cameras(const SceneConfig& cfg, const Box3D& box);

}  // namespace roadtrack::simulator
