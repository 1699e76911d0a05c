#include "roadtrack/evaluation/dimension_stats.hpp"

#include <cmath>
#include <vector>

namespace roadtrack::evaluation {

namespace {

DimensionSummary summarize(const std::vector<std::array<double, 3>>& err) {
  DimensionSummary s;
  s.samples = err.size();
  if (err.empty()) return s;
  const double n = static_cast<double>(err.size());
  for (int k = 0; k < 3; ++k) {
    double sum = 0.0, under = 0.0;
    for (const auto& e : err) {
      sum += e[k];
      if (std::abs(e[k]) < 1.0) under += 1.0;
    }
    s.mean[k] = sum / n;
    double ss = 0.0;
    for (const auto& e : err) ss += (e[k] - s.mean[k]) * (e[k] - s.mean[k]);
    s.std[k] = err.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.under_1ft_pct[k] = 100.0 * under / n;
  }
  return s;
}

}  // namespace

DimensionStats dimension_error_stats(std::span<const DimensionPair> pairs) {
  std::map<VehicleClass, std::vector<std::array<double, 3>>> grouped;
  std::vector<std::array<double, 3>> all;
  for (const auto& p : pairs) {
    const std::array<double, 3> e{p.annotated.l - p.truth.l, p.annotated.w - p.truth.w,
                                  p.annotated.h - p.truth.h};
    grouped[p.cls].push_back(e);
    all.push_back(e);
  }
  DimensionStats out;
  for (const auto& [cls, err] : grouped) out.per_class[cls] = summarize(err);
  out.overall = summarize(all);
  return out;
}

}  // namespace roadtrack::evaluation
