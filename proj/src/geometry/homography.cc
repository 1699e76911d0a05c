/******************************************************************************
 * Copyright 2026 The roadtrack Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "roadtrack/geometry/homography.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "roadtrack/core/error.hpp"

namespace roadtrack::geometry {

namespace {

// Isotropic normalization: centroid to origin, mean distance sqrt(2).
Eigen::Matrix3d normalizing_transform(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - c).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (!(mean_dist > 0.0)) {
    fail(ErrorKind::kDegenerateConfiguration, "all points coincide");
  }
  const double s = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d t;
  t << s, 0, -s * c.x(), 0, s, -s * c.y(), 0, 0, 1;
  return t;
}

Eigen::Vector2d apply(const Eigen::Matrix3d& h, const Eigen::Vector2d& p) {
  const Eigen::Vector3d q = h * p.homogeneous();
  return q.hnormalized();
}

// Road-space residuals in normalized coordinates; 8 free entries, entry
// `fixed_` held at its DLT value to remove the scale gauge.
struct RefineFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const std::vector<Eigen::Vector2d>* img;
  const std::vector<Eigen::Vector2d>* road;
  int fixed_;
  double fixed_value_;

  int inputs() const { return 8; }
  int values() const { return static_cast<int>(2 * img->size()); }

  Eigen::Matrix3d unpack(const Eigen::VectorXd& p) const {
    Eigen::Matrix<double, 9, 1> h;
    int k = 0;
    for (int i = 0; i < 9; ++i) h[i] = (i == fixed_) ? fixed_value_ : p[k++];
    Eigen::Matrix3d m;
    m << h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], h[8];
    return m;
  }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    const Eigen::Matrix3d m = unpack(p);
    for (std::size_t i = 0; i < img->size(); ++i) {
      const Eigen::Vector3d q = m * (*img)[i].homogeneous();
      f[2 * i] = q.x() / q.z() - (*road)[i].x();
      f[2 * i + 1] = q.y() / q.z() - (*road)[i].y();
    }
    return 0;
  }
};

}  // namespace

Homography normalized(const Homography& h) {
  Homography out = h;
  const double n = h.m.norm();
  if (n > 0.0) out.m /= n;
  Eigen::Index r = 0, c = 0;
  out.m.cwiseAbs().maxCoeff(&r, &c);
  if (out.m(r, c) < 0.0) out.m = -out.m;
  return out;
}

Homography inverse(const Homography& h) {
  Homography out;
  out.m = h.m.inverse();
  return normalized(out);
}

RoadPoint image_to_road(const Homography& h, const ImagePoint& p) {
  const Eigen::Vector3d q = h.m * Eigen::Vector3d(p.u, p.v, 1.0);
  const double scale = h.m.row(2).cwiseAbs().dot(Eigen::Vector3d(std::abs(p.u), std::abs(p.v), 1.0));
  if (std::abs(q.z()) <= 1e-12 * scale) {
    fail(ErrorKind::kAtInfinity, "image point maps to the road line at infinity");
  }
  return {q.x() / q.z(), q.y() / q.z(), 0.0};
}

double reprojection_rmse(const Homography& h, std::span<const Correspondence> correspondences) {
  if (correspondences.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : correspondences) {
    const RoadPoint r = image_to_road(h, c.image);
    const double dx = r.x - c.road.x;
    const double dy = r.y - c.road.y;
    sum += dx * dx + dy * dy;
  }
  return std::sqrt(sum / static_cast<double>(correspondences.size()));
}

Homography fit_road_homography(std::span<const Correspondence> correspondences) {
  const std::size_t n = correspondences.size();
  if (n < 4) {
    fail(ErrorKind::kTooFewPoints, "homography needs >= 4 correspondences, got " + std::to_string(n));
  }
  std::vector<Eigen::Vector2d> img(n), road(n);
  for (std::size_t i = 0; i < n; ++i) {
    img[i] = {correspondences[i].image.u, correspondences[i].image.v};
    road[i] = {correspondences[i].road.x, correspondences[i].road.y};
  }
  const Eigen::Matrix3d ti = normalizing_transform(img);
  const Eigen::Matrix3d tr = normalizing_transform(road);
  std::vector<Eigen::Vector2d> img_n(n), road_n(n);
  for (std::size_t i = 0; i < n; ++i) {
    img_n[i] = apply(ti, img[i]);
    road_n[i] = apply(tr, road[i]);
  }

  // Zero-padded to at least 9 rows so the full singular spectrum is available.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(std::max<std::size_t>(2 * n, 9), 9);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = img_n[i].x(), v = img_n[i].y();
    const double x = road_n[i].x(), y = road_n[i].y();
    a.row(2 * i) << u, v, 1, 0, 0, 0, -x * u, -x * v, -x;
    a.row(2 * i + 1) << 0, 0, 0, u, v, 1, -y * u, -y * v, -y;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  // A second vanishing singular value means the solution is not unique.
  if (sv.size() < 9 || sv[7] <= 1e-10 * sv[0]) {
    fail(ErrorKind::kDegenerateConfiguration, "correspondences do not determine a homography");
  }
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], h[8];
  // Collinear image points give a rank-deficient map.
  Eigen::JacobiSVD<Eigen::Matrix3d> hsvd(hn);
  if (hsvd.singularValues()[2] <= 1e-10 * hsvd.singularValues()[0]) {
    fail(ErrorKind::kDegenerateConfiguration, "fitted homography is singular");
  }

  auto denormalize = [&](const Eigen::Matrix3d& m) {
    Homography out;
    out.m = tr.inverse() * m * ti;
    return normalized(out);
  };
  Homography best = denormalize(hn);
  double best_rmse = reprojection_rmse(best, correspondences);

  if (best_rmse > 1e-6 && n > 4) {
    Eigen::Index fixed_r = 0, fixed_c = 0;
    hn.cwiseAbs().maxCoeff(&fixed_r, &fixed_c);
    const int fixed = static_cast<int>(fixed_r * 3 + fixed_c);
    RefineFunctor functor{&img_n, &road_n, fixed, hn(fixed_r, fixed_c)};
    Eigen::VectorXd p(8);
    int k = 0;
    for (int i = 0; i < 9; ++i) {
      if (i != fixed) p[k++] = hn(i / 3, i % 3);
    }
    Eigen::NumericalDiff<RefineFunctor> numdiff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<RefineFunctor>> lm(numdiff);
    lm.parameters.maxfev = 2000;
    lm.parameters.xtol = 1e-14;
    lm.parameters.ftol = 1e-14;
    lm.minimize(p);
    const Homography refined = denormalize(functor.unpack(p));
    try {
      const double r = reprojection_rmse(refined, correspondences);
      if (std::isfinite(r) && r < best_rmse) {
        best = refined;
        best_rmse = r;
      }
    } catch (const Error&) {
      // refinement wandered onto a horizon; keep the DLT answer
    }
  }
  return best;
}

}  // namespace roadtrack::geometry
