#pragma once

#include <span>
#include <string>
#include <vector>

#include "roadtrack/evaluation/report.hpp"
#include "roadtrack/io/formats.hpp"
#include "roadtrack/pipeline/scene.hpp"
#include "roadtrack/pipeline/sync.hpp"
#include "roadtrack/pipeline/track.hpp"

namespace roadtrack::pipeline {

/// Scores predicted labels against GT labels. Rows are grouped into objects
/// by vehicle id; camera columns are ignored.
evaluation::SceneEvaluation evaluate_labels(const std::vector<io::LabelRow>& gt,
                                            const std::vector<io::LabelRow>& pred,
                                            const evaluation::EvalConfig& config,
                                            const std::string& pipeline, const std::string& scene);

/// Reference labels for a scene: simulator truth when present, otherwise the
/// annotations on corrected time.
std::vector<io::LabelRow> reference_labels(const Scene& scene, const std::vector<io::TimestampRow>& corrected);

/// kiou and byte with each fusion option, then gt-tracklets with none and
/// tf. Parameters other than tracker and fusion come from `base`.
std::vector<PipelineSpec> pipeline_grid(const PipelineSpec& base);

struct PipelineOutput {
  PipelineSpec spec;
  std::vector<io::LabelRow> predictions;
  evaluation::SceneEvaluation evaluation;
};

struct SceneRun {
  SyncResult sync;
  std::vector<PipelineOutput> pipelines;
};

/// sync, then each pipeline's tracker and evaluation. Pipelines run on up to
/// `jobs` threads; results keep the order of `specs`.
SceneRun run_scene(const Scene& scene, const SyncConfig& sync, std::span<const PipelineSpec> specs,
                   int jobs = 1);

}  // namespace roadtrack::pipeline
