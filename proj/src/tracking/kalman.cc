#include "roadtrack/tracking/kalman.hpp"

#include <Eigen/Dense>

#include "roadtrack/core/error.hpp"

namespace roadtrack::tracking {

VehicleClass TrackState::vehicle_class() const {
  int best = static_cast<int>(last_class);
  for (int c = 0; c < kNumClasses; ++c) {
    if (class_votes[c] > class_votes[best]) best = c;
  }
  return static_cast<VehicleClass>(best);
}

Box3D TrackState::box() const {
  return {mean[0], mean[1], l, w, h, direction, vehicle_class()};
}

TrackState make_track(const Detection& det, std::int64_t id, const KalmanConfig& cfg) {
  TrackState s;
  s.id = id;
  s.direction = det.box.direction;
  s.mean << det.box.x, det.box.y, 0.0, 0.0;
  s.cov = Eigen::Vector4d(cfg.r[0], cfg.r[1], cfg.init_sigma_vx * cfg.init_sigma_vx,
                          cfg.init_sigma_vy * cfg.init_sigma_vy)
              .asDiagonal();
  s.l = det.box.l;
  s.w = det.box.w;
  s.h = det.box.h;
  s.dims_n = 1;
  s.hits = 1;
  s.class_votes[static_cast<int>(det.box.cls)] = 1;
  s.last_class = det.box.cls;
  return s;
}

TrackState kalman_predict(const TrackState& s, double dt, const KalmanConfig& cfg) {
  TrackState out = s;
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  out.mean = f * s.mean;
  const Eigen::Vector4d q(cfg.q[0], cfg.q[1], cfg.q[2], cfg.q[3]);
  out.cov = f * s.cov * f.transpose();
  out.cov += Eigen::Matrix4d(q.asDiagonal()) * dt;
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  return out;
}

TrackState kalman_update(const TrackState& s, const Detection& z, const KalmanConfig& cfg) {
  if (z.box.direction != s.direction) {
    fail(ErrorKind::kDirectionMismatch, "detection and track travel in different directions");
  }
  TrackState out = s;
  Eigen::Matrix<double, 2, 4> hm = Eigen::Matrix<double, 2, 4>::Zero();
  hm(0, 0) = 1.0;
  hm(1, 1) = 1.0;
  const Eigen::Matrix2d r = Eigen::Vector2d(cfg.r[0], cfg.r[1]).asDiagonal();
  const Eigen::Vector2d meas(z.box.x, z.box.y);
  out.innovation = meas - hm * s.mean;
  const Eigen::Matrix2d sm = hm * s.cov * hm.transpose() + r;
  const Eigen::Matrix<double, 4, 2> k = s.cov * hm.transpose() * sm.inverse();
  out.mean = s.mean + k * out.innovation;
  const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * hm;
  out.cov = ikh * s.cov * ikh.transpose() + k * r * k.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose());

  const double n = static_cast<double>(out.dims_n);
  out.l = (s.l * n + z.box.l) / (n + 1.0);
  out.w = (s.w * n + z.box.w) / (n + 1.0);
  out.h = (s.h * n + z.box.h) / (n + 1.0);
  out.dims_n += 1;
  out.hits += 1;
  out.misses = 0;
  out.class_votes[static_cast<int>(z.box.cls)] += 1;
  out.last_class = z.box.cls;
  return out;
}

}  // namespace roadtrack::tracking
