#pragma once

#include <span>

#include <Eigen/Core>

#include "roadtrack/core/types.hpp"

namespace roadtrack::tracking {

/// Footprint (bird's-eye) IOU of two boxes.
double iou_bev(const Box3D& a, const Box3D& b);

/// rows = a, cols = b.
Eigen::MatrixXd iou_matrix(std::span<const Box3D> a, std::span<const Box3D> b);

}  // namespace roadtrack::tracking
