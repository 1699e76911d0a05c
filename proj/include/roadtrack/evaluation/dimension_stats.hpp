#pragma once

#include <array>
#include <map>
#include <span>

#include "roadtrack/core/types.hpp"

namespace roadtrack::evaluation {

struct Dims {
  double l = 0.0, w = 0.0, h = 0.0;
};

struct DimensionPair {
  VehicleClass cls = VehicleClass::kSedan;
  Dims annotated;
  Dims truth;
};

/// Signed error statistics (annotated - true), one entry per axis l, w, h.
struct DimensionSummary {
  std::size_t samples = 0;
  std::array<double, 3> mean{};
  std::array<double, 3> std{};            // sample standard deviation (n - 1)
  std::array<double, 3> under_1ft_pct{};  // |error| < 1 ft
};

struct DimensionStats {
  std::map<VehicleClass, DimensionSummary> per_class;
  DimensionSummary overall;
};

DimensionStats dimension_error_stats(std::span<const DimensionPair> pairs);

}  // namespace roadtrack::evaluation
