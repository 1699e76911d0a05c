#include "roadtrack/simulator/cameras.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "roadtrack/core/rng.hpp"

namespace roadtrack::simulator {

namespace {
constexpr std::uint64_t kCameraStream = 2;
}

double world_y(const SceneConfig& cfg, double x, double y) {
  const double d = x - cfg.roadway_length / 2.0;
  return y + cfg.curvature * (d * d) / 2.0;
}

std::string camera_name(int index) { return fmt::format("c{:02d}", index + 1); }

std::optional<ImagePoint> SimCamera::project(const SceneConfig& cfg, const RoadPoint& q) const {
  const Eigen::Vector4d w(q.x, world_y(cfg, q.x, q.y), q.z, 1.0);
  const Eigen::Vector3d h = p * w;
  if (!(h.z() > 1e-9)) return std::nullopt;
  return ImagePoint{h.x() / h.z(), h.y() / h.z()};
}

std::vector<SimCamera> make_cameras(const SceneConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, kCameraStream));
  const double L = cfg.roadway_length;
  const double half_road = cfg.lanes_per_direction * cfg.lane_width;
  const double pole_y = -(half_road + cfg.pole_setback);
  const std::array<double, 3> poles{L / 6.0, L / 2.0, 5.0 * L / 6.0};
  const int n = cfg.camera_count;
  const double step = n > 1 ? (L - cfg.fov_length) / (n - 1) : 0.0;

  std::vector<SimCamera> cams;
  for (int i = 0; i < n; ++i) {
    SimCamera c;
    c.index = i;
    c.id = camera_name(i);
    const double xc = n > 1 ? cfg.fov_length / 2.0 + i * step : L / 2.0;
    c.fov_x0 = xc - cfg.fov_length / 2.0;
    c.fov_x1 = xc + cfg.fov_length / 2.0;
    std::size_t best = 0;
    for (std::size_t k = 1; k < poles.size(); ++k) {
      if (std::abs(poles[k] - xc) < std::abs(poles[best] - xc)) best = k;
    }
    c.pole = static_cast<int>(best) + 1;
    c.center = Eigen::Vector3d(poles[best], world_y(cfg, poles[best], pole_y), cfg.pole_height);

    const Eigen::Vector3d target(xc, world_y(cfg, xc, 0.0), 0.0);
    const Eigen::Vector3d fwd = (target - c.center).normalized();
    const Eigen::Vector3d right = fwd.cross(Eigen::Vector3d::UnitZ()).normalized();
    const Eigen::Vector3d down = fwd.cross(right);
    Eigen::Matrix3d r;
    r.row(0) = right.transpose();
    r.row(1) = down.transpose();
    r.row(2) = fwd.transpose();

    // Focal length so the field of view spans 90% of the image width.
    double spread = 0.0;
    for (double x : {c.fov_x0, c.fov_x1}) {
      for (double y : {-half_road, half_road}) {
        const Eigen::Vector3d q = r * (Eigen::Vector3d(x, world_y(cfg, x, y), 0.0) - c.center);
        spread = std::max(spread, std::abs(q.x() / q.z()));
      }
    }
    const double f = 0.45 * kImageWidth / spread;
    Eigen::Matrix3d k;
    k << f, 0.0, kImageWidth / 2.0, 0.0, f, kImageHeight / 2.0, 0.0, 0.0, 1.0;
    c.p.leftCols<3>() = k * r;
    c.p.col(3) = -(k * r * c.center);

    c.phase = cfg.random_phase ? rng.uniform() / 30.0 : 0.0;
    const double offset = rng.uniform(-cfg.offset_spread, cfg.offset_spread);
    c.clock_offset = i == 0 ? 0.0 : offset;
    cams.push_back(std::move(c));
  }
  return cams;
}

}  // namespace roadtrack::simulator
