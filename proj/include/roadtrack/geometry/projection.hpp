#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

#include "roadtrack/core/types.hpp"
#include "roadtrack/geometry/homography.hpp"

namespace roadtrack::geometry {

struct LineSegment {
  ImagePoint a;
  ImagePoint b;
};

/// 3x4 road-to-image projection. Columns 1, 2 and 4 equal the road-to-image
/// homography; column 3 carries the vertical vanishing direction.
struct CameraProjection {
  Eigen::Matrix<double, 3, 4> p = Eigen::Matrix<double, 3, 4>::Zero();
  /// Sign of the homogeneous coordinate for points in front of the camera.
  double front_sign = 1.0;
};

struct HeightSample {
  RoadPoint road;  // z > 0
  ImagePoint image;
};

/// Least-squares point minimizing summed squared perpendicular distance.
/// Throws ParallelLines when the normal equations are singular.
ImagePoint intersect_vertical_lines(std::span<const LineSegment> lines);

/// Builds P from the road-to-image homography `h_inv` and the vertical
/// vanishing point, then picks p33 by 1-D search (both signs, log-spaced
/// bracket [1e-6, 1e6], golden-section refinement to relative 1e-10).
/// Throws NoAbovePlaneSamples.
CameraProjection fit_projection(const Homography& h_inv, const ImagePoint& vp_z,
                                std::span<const HeightSample> samples);

/// Mean squared pixel error of `proj` over the samples.
double projection_mse(const CameraProjection& proj, std::span<const HeightSample> samples);

/// Throws AtInfinity for points on or behind the camera plane.
ImagePoint project_point(const CameraProjection& proj, const RoadPoint& p);

/// Corner order as in box_corners(). Throws AtInfinity if any corner fails.
std::array<ImagePoint, 8> road_to_image(const CameraProjection& proj, const Box3D& box);

}  // namespace roadtrack::geometry
