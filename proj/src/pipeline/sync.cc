#include "roadtrack/pipeline/sync.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "roadtrack/core/error.hpp"
#include "roadtrack/geometry/projection.hpp"
#include "roadtrack/timesync/offsets.hpp"
#include "roadtrack/timesync/shift.hpp"
#include "roadtrack/timesync/spline.hpp"

namespace roadtrack::pipeline {

SyncConfig SyncConfig::from_keyvalue(const KeyValueConfig& kv) {
  kv.require_known({"samples_per_object", "estimate_residuals", "max_shift_px"});
  SyncConfig c;
  c.samples_per_object = static_cast<int>(kv.get_int("samples_per_object", c.samples_per_object));
  c.estimate_residuals = kv.get_bool("estimate_residuals", c.estimate_residuals);
  c.max_shift_px = static_cast<int>(kv.get_int("max_shift_px", c.max_shift_px));
  c.validate();
  return c;
}

void SyncConfig::validate() const {
  if (samples_per_object < 2) fail(ErrorKind::kValidationError, "samples_per_object must be >= 2");
  if (max_shift_px < 0 || max_shift_px > 3) {
    fail(ErrorKind::kValidationError, "max_shift_px must be 0 (off), 1, 2 or 3");
  }
}

namespace {

using timesync::FrameKey;

// Pixels per foot of x motion at the annotation, from the camera's projection.
double pixel_weight(const Scene& scene, const io::LabelRow& r) {
  const CameraKey key{r.camera, r.box.direction};
  const auto tf = scene.transforms.find(key);
  if (tf == scene.transforms.end()) return 1.0;
  RoadPoint a{r.box.x, r.box.y, 0.0}, b{r.box.x + 1.0, r.box.y, 0.0};
  const auto cv = scene.curves.find(key);
  if (cv != scene.curves.end()) {
    a = geometry::apply_curvature(cv->second, a, true);
    b = geometry::apply_curvature(cv->second, b, true);
  }
  try {
    const ImagePoint pa = geometry::project_point(tf->second.projection, a);
    const ImagePoint pb = geometry::project_point(tf->second.projection, b);
    const double w = std::hypot(pa.u - pb.u, pa.v - pb.v);
    return w > 0.0 ? w : 1.0;
  } catch (const Error&) {
    return 1.0;
  }
}

std::map<ObjectId, timesync::TrajectorySpline> fit_splines(
    const std::map<ObjectId, std::vector<timesync::WeightedObservation>>& by_object) {
  std::map<ObjectId, timesync::TrajectorySpline> out;
  for (const auto& [id, obs] : by_object) {
    std::set<double> times;
    for (const auto& o : obs) times.insert(o.t);
    if (times.size() < 4) continue;
    try {
      out.emplace(id, timesync::fit_spline(obs));
    } catch (const Error& e) {
      spdlog::debug("sync: no spline for object {}: {}", id, e.what());
    }
  }
  return out;
}

using PairKey = std::tuple<ObjectId, std::string, std::string, std::int64_t>;

PairKey pair_key(const evaluation::CrossCameraPair& p) { return {p.object, p.camera_a, p.camera_b, p.frame_a}; }

StageMetrics stage_metrics(const std::string& name, const std::vector<evaluation::CrossCameraPair>& all,
                           const std::set<PairKey>& common, const evaluation::ProjectionMap& projections) {
  std::vector<evaluation::CrossCameraPair> pairs;
  pairs.reserve(common.size());
  for (const auto& p : all)
    if (common.count(pair_key(p))) pairs.push_back(p);
  const auto d = evaluation::ccde(pairs);
  const auto px = evaluation::ccpe(pairs, projections);
  return {name, d.dx, d.dy, px.mean_px, d.pairs};
}

}  // namespace

SyncResult synchronize(const Scene& scene, const SyncConfig& config) {
  config.validate();
  SyncResult result;

  // Reported time per frame.
  std::map<FrameKey, double> raw;
  for (const auto& t : scene.timestamps) raw[{t.camera, t.frame_index}] = t.timestamp;
  for (const auto& l : scene.labels) raw.emplace(FrameKey{l.camera, l.frame_index}, l.timestamp);
  std::set<std::string> camera_set;
  for (const auto& [k, v] : raw) camera_set.insert(k.camera);
  const std::vector<std::string> cameras(camera_set.begin(), camera_set.end());
  if (cameras.empty()) fail(ErrorKind::kEmptyScene, "no frames to synchronize");

  // Offsets.
  std::map<std::string, timesync::ObjectTracks> tracks;
  for (const auto& l : scene.labels) tracks[l.camera][l.vehicle_id].push_back({l.timestamp, l.box.x});
  std::vector<timesync::PairwiseOffset> links;
  for (std::size_t k = 1; k < cameras.size(); ++k) {
    for (std::size_t j = k; j-- > 0;) {
      try {
        const auto r = timesync::pairwise_offset(tracks[cameras[j]], tracks[cameras[k]], config.samples_per_object);
        links.push_back({cameras[k], cameras[j], r.offset});
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNoSharedObjects) throw;
      }
    }
  }
  result.offsets = timesync::chain_offsets(cameras, links);

  // Observations on offset-corrected time.
  std::map<ObjectId, std::vector<timesync::WeightedObservation>> by_object;
  std::map<FrameKey, std::vector<timesync::FrameObservation>> frame_obs;
  std::vector<double> weights;
  weights.reserve(scene.labels.size());
  for (const auto& l : scene.labels) {
    const double w = pixel_weight(scene, l);
    weights.push_back(w);
    const timesync::WeightedObservation o{l.timestamp + result.offsets.at(l.camera), l.box.x, l.box.y, w,
                                          l.camera, l.frame_index};
    by_object[l.vehicle_id].push_back(o);
    frame_obs[{l.camera, l.frame_index}].push_back({l.vehicle_id, o});
  }

  std::map<FrameKey, double> residual;
  if (config.estimate_residuals) {
    const auto splines = fit_splines(by_object);
    const auto r = timesync::estimate_residuals(splines, frame_obs);
    residual = r.residual;
    result.degenerate_frames = r.degenerate_frames;
  }

  for (const auto& [key, t_raw] : raw) {
    timesync::FrameStamp s;
    s.camera = key.camera;
    s.frame_index = key.frame_index;
    s.t_raw = t_raw;
    s.offset = result.offsets.at(key.camera);
    const auto it = residual.find(key);
    s.residual = it == residual.end() ? 0.0 : it->second;
    s.t_corrected = s.t_raw + s.offset + s.residual;
    result.stamps.push_back(s);
  }
  std::map<FrameKey, double> corrected;
  for (const auto& s : result.stamps) corrected[{s.camera, s.frame_index}] = s.t_corrected;
  if (!scene.timestamps.empty()) {
    for (auto t : scene.timestamps) {
      t.corrected_timestamp = corrected.at({t.camera, t.frame_index});
      result.timestamps.push_back(t);
    }
  } else {
    for (const auto& s : result.stamps) {
      result.timestamps.push_back({s.frame_index, s.camera, s.t_raw, s.t_corrected});
    }
  }

  // Stage metrics.
  auto annotations = [&](int stage) {
    std::vector<evaluation::CameraAnnotation> ann;
    ann.reserve(scene.labels.size());
    for (const auto& l : scene.labels) {
      evaluation::CameraAnnotation a{l.vehicle_id, l.camera, l.box.direction, l.timestamp, l.box.x, l.box.y,
                                     l.frame_index};
      if (stage == 0) {
        const auto cv = scene.curves.find({l.camera, l.box.direction});
        if (cv != scene.curves.end()) {
          a.y = geometry::apply_curvature(cv->second, {a.x, a.y, 0.0}, true).y;
        }
      }
      if (stage >= 2) a.t += result.offsets.at(l.camera);
      if (stage >= 3) {
        const auto it = residual.find({l.camera, l.frame_index});
        if (it != residual.end()) a.t += it->second;
      }
      ann.push_back(a);
    }
    return ann;
  };
  // Every stage is scored on the annotation pairs that exist at all stages,
  // so the numbers differ only by the correction applied.
  std::vector<std::pair<std::string, std::vector<evaluation::CameraAnnotation>>> stage_ann;
  stage_ann.emplace_back("homography", annotations(0));
  stage_ann.emplace_back("curve", annotations(1));
  stage_ann.emplace_back("offset", annotations(2));
  if (config.estimate_residuals) stage_ann.emplace_back("residual", annotations(3));
  if (config.max_shift_px > 0) {
    auto ann = annotations(3);
    std::map<ObjectId, std::vector<timesync::WeightedObservation>> refit;
    std::vector<timesync::FrameObservation> items;
    for (std::size_t i = 0; i < ann.size(); ++i) {
      const auto& a = ann[i];
      const timesync::WeightedObservation o{a.t, a.x, a.y, weights[i], a.camera, scene.labels[i].frame_index};
      refit[a.object].push_back(o);
      items.push_back({a.object, o});
    }
    const auto shifted = timesync::shift_annotations(items, fit_splines(refit), config.max_shift_px);
    for (std::size_t i = 0; i < ann.size(); ++i) {
      ann[i].x = shifted[i].item.obs.x;
      ann[i].y = shifted[i].item.obs.y;
    }
    stage_ann.emplace_back("shift", std::move(ann));
  }

  std::vector<std::vector<evaluation::CrossCameraPair>> stage_pairs;
  std::set<PairKey> common;
  for (std::size_t k = 0; k < stage_ann.size(); ++k) {
    stage_pairs.push_back(evaluation::build_cross_camera_pairs(stage_ann[k].second));
    std::set<PairKey> keys;
    for (const auto& p : stage_pairs.back()) keys.insert(pair_key(p));
    if (k == 0) {
      common = std::move(keys);
    } else {
      std::erase_if(common, [&](const PairKey& key) { return !keys.count(key); });
    }
  }
  const auto plain = scene.projection_map(false);
  const auto curved = scene.projection_map(true);
  for (std::size_t k = 0; k < stage_ann.size(); ++k) {
    result.stages.push_back(stage_metrics(stage_ann[k].first, stage_pairs[k], common, k == 0 ? plain : curved));
  }
  return result;
}

std::vector<io::LabelRow> corrected_labels(const std::vector<io::LabelRow>& labels,
                                           const std::vector<io::TimestampRow>& timestamps) {
  std::map<FrameKey, double> corrected;
  for (const auto& t : timestamps) corrected[{t.camera, t.frame_index}] = t.corrected_timestamp;
  std::vector<io::LabelRow> out = labels;
  for (auto& l : out) {
    const auto it = corrected.find({l.camera, l.frame_index});
    if (it == corrected.end()) {
      fail(ErrorKind::kSchemaMismatch,
           fmt::format("no timestamp for camera {} frame {}", l.camera, l.frame_index));
    }
    l.timestamp = it->second;
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<io::ResampledRow> resampled_labels(const Scene& scene, const std::vector<io::TimestampRow>& timestamps) {
  constexpr double kRate = 30.0;
  const auto labels = corrected_labels(scene.labels, timestamps);
  if (labels.empty()) return {};
  double origin = labels.front().timestamp;
  for (const auto& l : labels) origin = std::min(origin, l.timestamp);
  origin = std::floor(origin * kRate) / kRate;

  std::map<ObjectId, std::vector<const io::LabelRow*>> by_object;
  for (const auto& l : labels) by_object[l.vehicle_id].push_back(&l);

  std::vector<io::ResampledRow> out;
  for (const auto& [id, rows] : by_object) {
    std::vector<timesync::WeightedObservation> obs;
    std::vector<double> ls, ws, hs;
    std::map<VehicleClass, int> votes;
    std::map<std::string, std::pair<double, double>> spans;  // per camera
    for (const auto* r : rows) {
      obs.push_back({r->timestamp, r->box.x, r->box.y, 1.0, r->camera, r->frame_index});
      ls.push_back(r->box.l);
      ws.push_back(r->box.w);
      hs.push_back(r->box.h);
      ++votes[r->box.cls];
      auto [it, fresh] = spans.try_emplace(r->camera, r->timestamp, r->timestamp);
      it->second.first = std::min(it->second.first, r->timestamp);
      it->second.second = std::max(it->second.second, r->timestamp);
    }
    timesync::TrajectorySpline spline;
    try {
      spline = timesync::fit_spline(obs);
    } catch (const Error& e) {
      spdlog::debug("resample: skipping vehicle {}: {}", id, e.what());
      continue;
    }
    Box3D box = rows.front()->box;
    box.l = median(ls);
    box.w = median(ws);
    box.h = median(hs);
    box.cls = std::max_element(votes.begin(), votes.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; })
                  ->first;

    const auto k0 = static_cast<std::int64_t>(std::ceil((spline.t_min() - origin) * kRate - 1e-9));
    const auto k1 = static_cast<std::int64_t>(std::floor((spline.t_max() - origin) * kRate + 1e-9));
    for (std::int64_t k = k0; k <= k1; ++k) {
      const double t = origin + static_cast<double>(k) / kRate;
      std::tie(box.x, box.y) = spline.eval(t);
      io::ResampledRow row;
      row.label = {k, t, id, box, "none"};
      bool any = false;
      for (const auto& [camera, span] : spans) {
        if (t < span.first - 1e-9 || t > span.second + 1e-9) continue;
        any = true;
        row.label.camera = camera;
        row.pixels.fill(0.0);
        const CameraKey key{camera, box.direction};
        const auto tf = scene.transforms.find(key);
        if (tf != scene.transforms.end()) {
          const auto cv = scene.curves.find(key);
          const auto corners = box_corners(box);
          try {
            for (std::size_t c = 0; c < corners.size(); ++c) {
              const RoadPoint q =
                  cv != scene.curves.end() ? geometry::apply_curvature(cv->second, corners[c], true) : corners[c];
              const ImagePoint px = geometry::project_point(tf->second.projection, q);
              row.pixels[2 * c] = px.u;
              row.pixels[2 * c + 1] = px.v;
            }
          } catch (const Error&) {
            row.pixels.fill(0.0);
          }
        }
        out.push_back(row);
      }
      if (!any) {
        row.label.camera = "none";
        row.pixels.fill(0.0);
        out.push_back(row);
      }
    }
  }
  return out;
}

}  // namespace roadtrack::pipeline
