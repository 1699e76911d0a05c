#pragma once

#include <span>

#include <Eigen/Core>

#include "roadtrack/core/types.hpp"

namespace roadtrack::geometry {

struct Correspondence {
  ImagePoint image;
  RoadPoint road;  // z = 0
};

/// Image-plane to road-plane projective map, defined up to scale.
struct Homography {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
};

/// Scales to unit Frobenius norm with the sign chosen so the largest-magnitude
/// entry is positive. Stable even when h33 is near zero.
Homography normalized(const Homography& h);

Homography inverse(const Homography& h);

/// Normalized DLT followed by Levenberg-Marquardt refinement of the road-space
/// error whenever the DLT residual exceeds 1e-6 ft.
/// Throws TooFewPoints (< 4) or DegenerateConfiguration.
Homography fit_road_homography(std::span<const Correspondence> correspondences);

/// RMS road-plane distance between H(image) and road over the correspondences.
double reprojection_rmse(const Homography& h, std::span<const Correspondence> correspondences);

/// Throws AtInfinity when the point maps to the line at infinity.
RoadPoint image_to_road(const Homography& h, const ImagePoint& p);

}  // namespace roadtrack::geometry
