#pragma once

#include <span>
#include <string>
#include <vector>

#include "roadtrack/evaluation/alignment.hpp"
#include "roadtrack/evaluation/clearmot.hpp"
#include "roadtrack/evaluation/hota.hpp"
#include "roadtrack/evaluation/timespace.hpp"

namespace roadtrack::evaluation {

/// One (pipeline, scene) row. All scores in percent except switches_per_gt.
struct MetricsRow {
  std::string pipeline;
  std::string scene;
  double hota = 0.0, det_a = 0.0, ass_a = 0.0;
  double hota_at_threshold = 0.0;  // HOTA at the matching IOU threshold
  double mota = 0.0, motp = 0.0, recall = 0.0, precision = 0.0;
  double gt_pct = 0.0, pred_pct = 0.0, mt_pct = 0.0, ml_pct = 0.0;
  double switches_per_gt = 0.0;
  long id_switches = 0;
  bool operator==(const MetricsRow&) const = default;
};

struct SceneEvaluation {
  MetricsRow row;
  ClearMotResult clearmot;
  HotaResult hota;
  std::vector<TimeSpacePoint> timespace;
  std::size_t frames = 0;
};

SceneEvaluation evaluate(std::span<const ObjectTrack> gt, std::span<const ObjectTrack> pred,
                         const EvalConfig& config);

struct MetricsReport {
  std::vector<MetricsRow> rows;
  /// Unweighted mean of the rows, per pipeline.
  std::vector<MetricsRow> aggregate() const;

  std::string to_json() const;
  /// Per-scene rows, then the aggregate rows (scene "all"). Values are in
  /// shortest round-trip form.
  std::string to_csv() const;
  /// Inverse of to_csv. Aggregate rows are dropped since to_csv derives them.
  static MetricsReport from_csv(const std::string& text, const std::string& origin = "<metrics>");
};

std::string timespace_csv(std::span<const TimeSpacePoint> points);
std::vector<TimeSpacePoint> parse_timespace_csv(const std::string& text, const std::string& origin = "<timespace>");

}  // namespace roadtrack::evaluation
