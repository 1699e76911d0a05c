#pragma once

#include <span>
#include <vector>

#include "roadtrack/evaluation/alignment.hpp"

namespace roadtrack::evaluation {

struct HotaResult {
  std::vector<double> alphas;
  // Per threshold, as fractions in [0, 1].
  std::vector<double> hota, det_a, ass_a, loc_a;
  std::vector<long> tp, fn, fp;
  // Means over the thresholds.
  double hota_mean = 0.0, det_a_mean = 0.0, ass_a_mean = 0.0, loc_a_mean = 0.0;
};

/// Higher order tracking accuracy with footprint IOU as similarity. One
/// assignment per frame maximizing (global alignment x similarity), then each
/// threshold keeps only pairs with similarity >= alpha.
HotaResult hota(const AlignedSequence& seq, std::span<const double> thresholds);

}  // namespace roadtrack::evaluation
