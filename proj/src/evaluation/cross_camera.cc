#include "roadtrack/evaluation/cross_camera.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "roadtrack/core/error.hpp"

namespace roadtrack::evaluation {

namespace {

using Series = std::vector<const CameraAnnotation*>;

std::optional<std::pair<double, double>> interpolate(const Series& s, double t) {
  if (s.empty() || t < s.front()->t || t > s.back()->t) return std::nullopt;
  const auto it = std::lower_bound(s.begin(), s.end(), t,
                                   [](const CameraAnnotation* a, double v) { return a->t < v; });
  if ((*it)->t == t) return std::make_pair((*it)->x, (*it)->y);
  const CameraAnnotation* hi = *it;
  const CameraAnnotation* lo = *(it - 1);
  const double f = (t - lo->t) / (hi->t - lo->t);
  return std::make_pair(lo->x + f * (hi->x - lo->x), lo->y + f * (hi->y - lo->y));
}

}  // namespace

std::vector<CrossCameraPair> build_cross_camera_pairs(std::span<const CameraAnnotation> annotations) {
  std::map<ObjectId, std::map<std::string, Series>> by_object;
  for (const auto& a : annotations) by_object[a.object][a.camera].push_back(&a);
  std::vector<CrossCameraPair> out;
  for (auto& [object, cams] : by_object) {
    for (auto& [cam, s] : cams) {
      std::stable_sort(s.begin(), s.end(),
                       [](const CameraAnnotation* a, const CameraAnnotation* b) { return a->t < b->t; });
    }
    for (const auto& [cam_a, sa] : cams) {
      for (const auto& [cam_b, sb] : cams) {
        if (cam_a == cam_b) continue;
        for (const CameraAnnotation* a : sa) {
          const auto pb = interpolate(sb, a->t);
          if (!pb) continue;
          CrossCameraPair p;
          p.object = object;
          p.camera_a = cam_a;
          p.camera_b = cam_b;
          p.direction = a->direction;
          p.t = a->t;
          p.frame_a = a->frame_index;
          p.a = {a->x, a->y, 0.0};
          p.b = {pb->first, pb->second, 0.0};
          out.push_back(p);
        }
      }
    }
  }
  return out;
}

CcdeResult ccde(std::span<const CrossCameraPair> pairs) {
  CcdeResult r;
  for (const auto& p : pairs) {
    r.dx += std::abs(p.a.x - p.b.x);
    r.dy += std::abs(p.a.y - p.b.y);
  }
  r.pairs = pairs.size();
  if (r.pairs > 0) {
    r.dx /= static_cast<double>(r.pairs);
    r.dy /= static_cast<double>(r.pairs);
  }
  return r;
}

CcpeResult ccpe(std::span<const CrossCameraPair> pairs, const ProjectionMap& projections) {
  CcpeResult r;
  double sum = 0.0;
  for (const auto& p : pairs) {
    const auto it = projections.find({p.camera_b, p.direction});
    if (it == projections.end()) {
      ++r.excluded;
      continue;
    }
    const CameraModel& m = it->second;
    RoadPoint a = p.a, b = p.b;
    if (m.curve) {
      a = geometry::apply_curvature(*m.curve, a, true);
      b = geometry::apply_curvature(*m.curve, b, true);
    }
    try {
      const ImagePoint ia = geometry::project_point(m.projection, a);
      const ImagePoint ib = geometry::project_point(m.projection, b);
      sum += std::hypot(ia.u - ib.u, ia.v - ib.v);
      ++r.pairs;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kAtInfinity) throw;
      spdlog::debug("ccpe: pair for object {} at t={} excluded: {}", p.object, p.t, e.what());
      ++r.excluded;
    }
  }
  if (r.pairs > 0) r.mean_px = sum / static_cast<double>(r.pairs);
  return r;
}

double total_variation(std::span<const double> x) {
  if (x.size() < 2) fail(ErrorKind::kZeroDistance, "total variation needs at least 2 samples");
  double path = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) path += std::abs(x[i] - x[i - 1]);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*hi == *lo) fail(ErrorKind::kZeroDistance, "object did not move");
  return path / (*hi - *lo);
}

}  // namespace roadtrack::evaluation
