#pragma once

#include <span>
#include <vector>

#include "roadtrack/tracking/kalman.hpp"

namespace roadtrack::tracking {

/// Greedy NMS across cameras: visit by descending confidence (ties by input
/// order) and drop any detection whose footprint IOU with an already kept one
/// exceeds iou_threshold. Output keeps input order.
std::vector<Detection> fuse_detections(std::span<const Detection> detections,
                                       double iou_threshold = 0.01);

/// Indices kept by the same greedy rule, for any box list.
std::vector<int> nms_keep(std::span<const Box3D> boxes, std::span<const double> scores,
                          double iou_threshold);

}  // namespace roadtrack::tracking
