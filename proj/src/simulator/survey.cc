#include "roadtrack/simulator/survey.hpp"

#include <cmath>

#include <fmt/format.h>

#include "roadtrack/core/error.hpp"

namespace roadtrack::simulator {

namespace {

constexpr std::uint64_t kSurveyStream = 5;
constexpr double kPostHeight = 15.0;

ImagePoint click(const SceneConfig& cfg, const SimCamera& cam, const RoadPoint& p, Rng& rng) {
  const auto im = cam.project(cfg, p);
  if (!im) {
    fail(ErrorKind::kDegenerateConfiguration,
         fmt::format("survey point ({}, {}) is behind camera {}", p.x, p.y, cam.id));
  }
  return {im->u + cfg.click_sigma * rng.normal(), im->v + cfg.click_sigma * rng.normal()};
}

}  // namespace

geometry::CalibrationPoints survey_points(const SceneConfig& cfg, const SimCamera& cam, Direction dir,
                                          Rng& rng) {
  geometry::CalibrationPoints pts;
  const double s = direction_sign(dir);
  const double span = cam.fov_x1 - cam.fov_x0;
  const double lo = cam.fov_x0 + 0.2 * span, hi = cam.fov_x1 - 0.2 * span;
  for (int k = 1; k <= cfg.lanes_per_direction; ++k) {
    const double y = s * k * cfg.lane_width;
    for (double x = std::ceil(lo / 40.0) * 40.0; x <= hi; x += 40.0) {
      for (double xt : {x, x + 10.0}) {
        if (xt > hi) continue;
        const RoadPoint p{xt, y, 0.0};
        pts.ground.push_back({click(cfg, cam, p, rng), p});
      }
    }
  }
  for (double x = std::ceil(cam.fov_x0 / 20.0) * 20.0; x <= cam.fov_x1; x += 20.0) {
    pts.lane.push_back(click(cfg, cam, {x, 0.0, 0.0}, rng));
  }
  const double xc = 0.5 * (cam.fov_x0 + cam.fov_x1);
  const double y_post = s * (cfg.lanes_per_direction * cfg.lane_width + 6.0);
  for (double dx : {-0.24, -0.08, 0.08, 0.24}) {
    const double x = xc + dx * span;
    const ImagePoint base = click(cfg, cam, {x, y_post, 0.0}, rng);
    const ImagePoint top = click(cfg, cam, {x, y_post, kPostHeight}, rng);
    pts.verticals.push_back({base, top});
    pts.heights.push_back({{x, y_post, kPostHeight}, top});
  }
  return pts;
}

std::map<CalibrationKey, SurveyedCamera> survey_scene(const SceneConfig& cfg,
                                                      const std::vector<SimCamera>& cams) {
  std::map<CalibrationKey, SurveyedCamera> out;
  for (const auto& cam : cams) {
    for (Direction dir : {Direction::kEB, Direction::kWB}) {
      Rng rng(derive_seed(derive_seed(cfg.seed, kSurveyStream),
                          static_cast<std::uint64_t>(2 * cam.index + (dir == Direction::kWB ? 1 : 0))));
      SurveyedCamera sc;
      sc.points = survey_points(cfg, cam, dir, rng);
      sc.calibration = geometry::calibrate(sc.points);
      out.emplace(CalibrationKey{cam.id, dir}, std::move(sc));
    }
  }
  return out;
}

RoadPoint annotate_point(const SceneConfig& cfg, const SimCamera& cam, const geometry::Calibration& cal,
                         const RoadPoint& truth, Rng& rng) {
  const auto im = cam.project(cfg, truth);
  if (!im) fail(ErrorKind::kAtInfinity, fmt::format("annotation behind camera {}", cam.id));
  const double su = cfg.annotation_pixel_sigma;
  const ImagePoint noisy{im->u + su * rng.normal(), im->v + su * rng.normal()};
  return geometry::apply_curvature(cal.curve, geometry::image_to_road(cal.h, noisy));
}

}  // namespace roadtrack::simulator
