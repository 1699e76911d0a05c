#include "roadtrack/simulator/detections.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "roadtrack/core/rng.hpp"
#include "roadtrack/simulator/traffic.hpp"
#include "roadtrack/tracking/fusion.hpp"

namespace roadtrack::simulator {

namespace {

constexpr std::uint64_t kDetectionStream = 6;
constexpr std::uint64_t kOcclusionStream = 7;

struct PixelRect {
  double u0, v0, u1, v1;
  bool valid;
};

PixelRect pixel_rect(const SceneConfig& cfg, const SimCamera& cam, const Box3D& b) {
  PixelRect r{1e300, 1e300, -1e300, -1e300, true};
  for (const RoadPoint& c : box_corners(b)) {
    const auto im = cam.project(cfg, c);
    if (!im) return {0, 0, 0, 0, false};
    r.u0 = std::min(r.u0, im->u);
    r.v0 = std::min(r.v0, im->v);
    r.u1 = std::max(r.u1, im->u);
    r.v1 = std::max(r.v1, im->v);
  }
  return r;
}

double rect_iou(const PixelRect& a, const PixelRect& b) {
  if (!a.valid || !b.valid) return 0.0;
  const double iw = std::max(0.0, std::min(a.u1, b.u1) - std::max(a.u0, b.u0));
  const double ih = std::max(0.0, std::min(a.v1, b.v1) - std::max(a.v0, b.v0));
  const double inter = iw * ih;
  const double uni = (a.u1 - a.u0) * (a.v1 - a.v0) + (b.u1 - b.u0) * (b.v1 - b.v0) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

bool occluded(const std::vector<OcclusionWindow>& windows, ObjectId vehicle, std::int64_t frame) {
  for (const auto& w : windows) {
    if (w.vehicle == vehicle && frame >= w.start_frame && frame < w.start_frame + w.frames) return true;
  }
  return false;
}

}  // namespace

int lane_distance_from_cameras(const SceneConfig& cfg, const Box3D& box) {
  // Cameras stand on the westbound side.
  const int lane = lane_index(box.y, cfg.lane_width);
  const int n = cfg.lanes_per_direction;
  return box.y < 0.0 ? std::max(0, n - lane) : n + lane - 1;
}

std::vector<OcclusionWindow> occlusion_windows(const SceneConfig& cfg, const SimCamera& cam,
                                               const std::vector<RenderedFrame>& frames) {
  const NoiseConfig& nc = cfg.noise;
  std::vector<OcclusionWindow> out;
  for (const auto& w : nc.scripted_occlusions) {
    if (w.camera.empty() || w.camera == cam.id) out.push_back({w.vehicle, cam.id, w.start_frame, w.frames});
  }
  if (nc.occlusion_rate <= 0.0) return out;
  std::map<ObjectId, std::pair<std::int64_t, std::int64_t>> seen;  // first, last frame
  for (const auto& f : frames) {
    for (const auto& b : f.boxes) {
      auto [it, inserted] = seen.emplace(b.vehicle, std::make_pair(f.frame_index, f.frame_index));
      if (!inserted) it->second.second = f.frame_index;
    }
  }
  Rng rng(derive_seed(derive_seed(cfg.seed, kOcclusionStream), static_cast<std::uint64_t>(cam.index)));
  for (const auto& [vehicle, span] : seen) {
    const bool hit = rng.bernoulli(nc.occlusion_rate);
    const int len = rng.uniform_int(nc.min_occlusion_frames, nc.max_occlusion_frames);
    const double u = rng.uniform();
    if (!hit) continue;
    const auto start = span.first + static_cast<std::int64_t>(u * static_cast<double>(span.second - span.first + 1));
    out.push_back({vehicle, cam.id, start, len});
  }
  return out;
}

std::vector<DetectionFrameOut> corrupt_detections(const SceneConfig& cfg, const SimCamera& cam,
                                                  const std::vector<RenderedFrame>& frames) {
  const NoiseConfig& nc = cfg.noise;
  const bool clean = nc.is_zero();
  const auto windows = occlusion_windows(cfg, cam, frames);
  Rng rng(derive_seed(derive_seed(cfg.seed, kDetectionStream), static_cast<std::uint64_t>(cam.index)));
  const std::vector<double> mix(cfg.class_mix.begin(), cfg.class_mix.end());

  std::vector<DetectionFrameOut> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    DetectionFrameOut df;
    df.frame_index = f.frame_index;
    df.t_raw = f.t_raw;
    for (const auto& tb : f.boxes) {
      if (occluded(windows, tb.vehicle, f.frame_index)) continue;
      if (clean) {
        df.detections.push_back({tb.vehicle, tb.box, 1.0});
        continue;
      }
      const double p_miss = std::min(1.0, nc.fn_base + nc.fn_per_lane * lane_distance_from_cameras(cfg, tb.box));
      const bool miss = rng.bernoulli(p_miss);
      Box3D b = tb.box;
      b.x += nc.position_sigma * rng.normal();
      b.y += nc.position_sigma * rng.normal();
      b.l = std::max(0.5, b.l + nc.dimension_sigma * rng.normal());
      b.w = std::max(0.5, b.w + nc.dimension_sigma * rng.normal());
      b.h = std::max(0.5, b.h + nc.dimension_sigma * rng.normal());
      const double conf = rng.uniform(nc.true_confidence_min, 1.0);
      if (!miss) df.detections.push_back({tb.vehicle, b, conf});
    }
    if (clean) {
      out.push_back(std::move(df));
      continue;
    }
    if (rng.bernoulli(nc.p_fp)) {
      const auto dir = rng.bernoulli(0.5) ? Direction::kEB : Direction::kWB;
      const int lane = rng.uniform_int(1, cfg.lanes_per_direction);
      const auto cls = static_cast<VehicleClass>(rng.categorical(mix));
      const auto dims = class_dimensions(cls);
      const double x = rng.uniform(cam.fov_x0, cam.fov_x1);
      const double y = direction_sign(dir) * (lane - 0.5) * cfg.lane_width + rng.normal();
      const double conf = rng.uniform(0.01, nc.fp_confidence_max);
      df.detections.push_back({-1, Box3D{x, y, dims[0], dims[1], dims[2], dir, cls}, conf});
    }

    // Pixel NMS, greedy by confidence.
    std::vector<std::size_t> order(df.detections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return df.detections[a].confidence > df.detections[b].confidence;
    });
    std::vector<PixelRect> rects;
    for (const auto& d : df.detections) rects.push_back(pixel_rect(cfg, cam, d.box));
    std::vector<char> keep(df.detections.size(), 0);
    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
      bool ok = true;
      for (std::size_t k : kept) {
        if (rect_iou(rects[i], rects[k]) > nc.pixel_nms) {
          ok = false;
          break;
        }
      }
      if (ok) {
        kept.push_back(i);
        keep[i] = 1;
      }
    }
    std::vector<SimDetection> stage;
    for (std::size_t i = 0; i < df.detections.size(); ++i) {
      if (keep[i]) stage.push_back(df.detections[i]);
    }
    // Road-plane NMS.
    std::vector<Box3D> boxes;
    std::vector<double> scores;
    for (const auto& d : stage) {
      boxes.push_back(d.box);
      scores.push_back(d.confidence);
    }
    df.detections.clear();
    for (int i : tracking::nms_keep(boxes, scores, nc.road_nms)) df.detections.push_back(stage[i]);
    out.push_back(std::move(df));
  }
  return out;
}

}  // namespace roadtrack::simulator
