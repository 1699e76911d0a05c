#pragma once

#include <cstdint>
#include <vector>

#include "roadtrack/simulator/cameras.hpp"
#include "roadtrack/simulator/traffic.hpp"

namespace roadtrack::simulator {

struct TrueBox {
  ObjectId vehicle = 0;
  Box3D box;
};

/// One emitted video frame.
struct RenderedFrame {
  std::int64_t frame_index = 0;    // position in the emitted stream
  std::int64_t capture_index = 0;  // nominal capture slot
  double t_true = 0.0;             // scene time of capture, s
  double t_raw = 0.0;              // reported timestamp, epoch seconds
  double residual = 0.0;           // true per-frame error beyond the clock offset
  bool doubled = false;            // repeat of the previous frame
  std::vector<TrueBox> boxes;      // vehicles whose footprint meets the field of view
};

/// Reported time: floor to 0.01 s of (epoch + t - offset - residual). A
/// skipped capture is not emitted and the next frame is stamped one frame
/// period early; a doubled capture is emitted twice with the same stamp.
std::vector<RenderedFrame> render_camera(const SceneTruth& truth, const SimCamera& cam);

/// The quantized stamp for a scene time (exposed for oracle checks).
double quantize_stamp(double epoch_base, double t);

}  // namespace roadtrack::simulator
