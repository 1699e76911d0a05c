#pragma once

#include <utility>
#include <vector>

#include "roadtrack/evaluation/alignment.hpp"

namespace roadtrack::evaluation {

struct FrameMatch {
  std::vector<std::pair<int, int>> pairs;  // (gt index, pred index) within the frame
  std::vector<double> iou;                 // per pair
};

using MatchedSequence = std::vector<FrameMatch>;

/// CLEAR-MOT correspondence: pairs matched at the previous frame are kept if
/// their IOU is still >= threshold, the remainder is solved by Hungarian
/// assignment maximizing total IOU over pairs >= threshold.
MatchedSequence match_frames(const AlignedSequence& seq, double threshold);

struct ClearMotResult {
  long tp = 0, fp = 0, fn = 0, id_switches = 0;
  long gt_dets = 0;
  int gt_objects = 0, pred_objects = 0;
  int mostly_tracked = 0, partially_tracked = 0, mostly_lost = 0;
  int gt_matched_objects = 0, pred_matched_objects = 0;
  double iou_sum = 0.0;

  // Percentages.
  double mota = 0.0, motp = 0.0, recall = 0.0, precision = 0.0;
  double mt_pct = 0.0, pt_pct = 0.0, ml_pct = 0.0, gt_pct = 0.0, pred_pct = 0.0;
  double switches_per_gt = 0.0;
};

/// MOTA = 1 - (FN + FP + SW) / GT. A switch is a GT matched to a prediction
/// other than the one it was last matched to. MT: matched >= 80% of its
/// frames; ML: <= 20%.
ClearMotResult clearmot(const AlignedSequence& seq, const MatchedSequence& matches);

}  // namespace roadtrack::evaluation
