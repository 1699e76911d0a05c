#pragma once

#include <span>
#include <vector>

#include "roadtrack/core/types.hpp"

namespace roadtrack::evaluation {

struct ScoredBox {
  Box3D box;
  double confidence = 0.0;
};

/// Detections and ground truth of one camera frame.
struct ApFrame {
  std::vector<Box3D> gt;
  std::vector<ScoredBox> detections;
};

struct PrCurve {
  double iou_threshold = 0.0;
  double ap = 0.0;
  std::vector<double> recall, precision;  // one point per ranked detection
};

/// Bird's-eye AP with all-point interpolation. Detections are ranked by
/// confidence over all frames; each takes its best-overlapping GT in the same
/// frame and is a true positive only if that GT is unclaimed and the IOU
/// clears the threshold. A second claim on a GT counts as a false positive.
PrCurve average_precision(std::span<const ApFrame> frames, double iou_threshold);

std::vector<PrCurve> average_precision(std::span<const ApFrame> frames,
                                       std::span<const double> iou_thresholds);

}  // namespace roadtrack::evaluation
