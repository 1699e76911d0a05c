#include "roadtrack/evaluation/average_precision.hpp"

#include <algorithm>

#include "roadtrack/tracking/iou.hpp"

namespace roadtrack::evaluation {

PrCurve average_precision(std::span<const ApFrame> frames, double iou_threshold) {
  struct Ranked {
    double confidence;
    std::size_t frame, det;
  };
  std::vector<Ranked> ranked;
  std::size_t n_gt = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    n_gt += frames[f].gt.size();
    for (std::size_t d = 0; d < frames[f].detections.size(); ++d) {
      ranked.push_back({frames[f].detections[d].confidence, f, d});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) { return a.confidence > b.confidence; });

  std::vector<std::vector<char>> claimed(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) claimed[f].assign(frames[f].gt.size(), 0);

  PrCurve c;
  c.iou_threshold = iou_threshold;
  long tp = 0, fp = 0;
  for (const Ranked& r : ranked) {
    const ApFrame& fr = frames[r.frame];
    const Box3D& det = fr.detections[r.det].box;
    double best = -1.0;
    std::size_t best_g = 0;
    for (std::size_t g = 0; g < fr.gt.size(); ++g) {
      const double v = tracking::iou_bev(det, fr.gt[g]);
      if (v > best) {
        best = v;
        best_g = g;
      }
    }
    if (best >= iou_threshold && !claimed[r.frame][best_g]) {
      claimed[r.frame][best_g] = 1;
      ++tp;
    } else {
      ++fp;
    }
    c.recall.push_back(n_gt > 0 ? static_cast<double>(tp) / static_cast<double>(n_gt) : 0.0);
    c.precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
  }

  if (n_gt == 0) return c;
  // Precision envelope, then area under the step function.
  std::vector<double> mrec{0.0}, mpre{0.0};
  mrec.insert(mrec.end(), c.recall.begin(), c.recall.end());
  mpre.insert(mpre.end(), c.precision.begin(), c.precision.end());
  mrec.push_back(1.0);
  mpre.push_back(0.0);
  for (std::size_t i = mpre.size() - 1; i > 0; --i) mpre[i - 1] = std::max(mpre[i - 1], mpre[i]);
  for (std::size_t i = 1; i < mrec.size(); ++i) {
    if (mrec[i] != mrec[i - 1]) c.ap += (mrec[i] - mrec[i - 1]) * mpre[i];
  }
  return c;
}

std::vector<PrCurve> average_precision(std::span<const ApFrame> frames,
                                       std::span<const double> iou_thresholds) {
  std::vector<PrCurve> out;
  for (double t : iou_thresholds) out.push_back(average_precision(frames, t));
  return out;
}

}  // namespace roadtrack::evaluation
