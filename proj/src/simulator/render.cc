#include "roadtrack/simulator/render.hpp"

#include <algorithm>
#include <cmath>

#include "roadtrack/core/rng.hpp"

namespace roadtrack::simulator {

namespace {
constexpr std::uint64_t kTimestampStream = 3;
constexpr double kFramePeriod = 1.0 / 30.0;

bool forced(const std::vector<std::pair<std::string, std::int64_t>>& events, const std::string& cam,
            std::int64_t capture) {
  return std::find(events.begin(), events.end(), std::make_pair(cam, capture)) != events.end();
}
}  // namespace

double quantize_stamp(double epoch_base, double t) {
  // Scene times like j / 30 land a hair below a 0.01 s boundary in binary.
  return epoch_base + std::floor(t * 100.0 + 1e-7) / 100.0;
}

std::vector<RenderedFrame> render_camera(const SceneTruth& truth, const SimCamera& cam) {
  const SceneConfig& cfg = truth.config;
  Rng rng(derive_seed(derive_seed(cfg.seed, kTimestampStream), static_cast<std::uint64_t>(cam.index)));
  std::vector<RenderedFrame> out;
  std::int64_t frame_index = 0;
  bool early = false;
  for (std::int64_t j = 0;; ++j) {
    const double t = cam.phase + static_cast<double>(j) * kFramePeriod;
    if (t >= cfg.duration) break;
    // Both draws happen every capture so the streams stay aligned across configs.
    const bool skip = rng.bernoulli(cfg.p_skip) || forced(cfg.forced_skips, cam.id, j);
    const bool twice = rng.bernoulli(cfg.p_double) || forced(cfg.forced_doubles, cam.id, j);
    if (skip) {
      early = true;
      continue;
    }
    RenderedFrame f;
    f.frame_index = frame_index++;
    f.capture_index = j;
    f.t_true = t;
    f.residual = early ? kFramePeriod : 0.0;
    early = false;
    f.t_raw = quantize_stamp(cfg.epoch_base, t - cam.clock_offset - f.residual);
    for (const VehicleTruth* v : truth.visible(t, cam.fov_x0, cam.fov_x1)) {
      f.boxes.push_back({v->id, v->box(t, cfg.roadway_length)});
    }
    out.push_back(f);
    if (twice) {
      RenderedFrame d = f;
      d.frame_index = frame_index++;
      d.doubled = true;
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace roadtrack::simulator
