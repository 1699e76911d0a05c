#include "roadtrack/tracking/fusion.hpp"

#include <algorithm>
#include <numeric>

#include "roadtrack/tracking/iou.hpp"

namespace roadtrack::tracking {

std::vector<int> nms_keep(std::span<const Box3D> boxes, std::span<const double> scores,
                          double iou_threshold) {
  std::vector<int> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
  const Eigen::MatrixXd iou = iou_matrix(boxes, boxes);
  std::vector<int> kept;
  for (int i : order) {
    bool suppressed = false;
    for (int k : kept) {
      if (iou(i, k) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<Detection> fuse_detections(std::span<const Detection> detections, double iou_threshold) {
  std::vector<Box3D> boxes;
  std::vector<double> scores;
  for (const auto& d : detections) {
    boxes.push_back(d.box);
    scores.push_back(d.confidence);
  }
  std::vector<Detection> out;
  for (int i : nms_keep(boxes, scores, iou_threshold)) out.push_back(detections[i]);
  return out;
}

}  // namespace roadtrack::tracking
