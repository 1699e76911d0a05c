#include "roadtrack/pipeline/evaluate.hpp"

#include "roadtrack/core/parallel.hpp"

namespace roadtrack::pipeline {

evaluation::SceneEvaluation evaluate_labels(const std::vector<io::LabelRow>& gt,
                                            const std::vector<io::LabelRow>& pred,
                                            const evaluation::EvalConfig& config,
                                            const std::string& pipeline, const std::string& scene) {
  const auto gt_tracks = labels_to_tracks(gt);
  const auto pred_tracks = labels_to_tracks(pred);
  auto result = evaluation::evaluate(gt_tracks, pred_tracks, config);
  result.row.pipeline = pipeline;
  result.row.scene = scene;
  return result;
}

std::vector<io::LabelRow> reference_labels(const Scene& scene, const std::vector<io::TimestampRow>& corrected) {
  if (!scene.ground_truth.empty()) return scene.ground_truth;
  return corrected_labels(scene.labels, corrected);
}

std::vector<PipelineSpec> pipeline_grid(const PipelineSpec& base) {
  using tracking::Fusion;
  std::vector<PipelineSpec> out;
  for (const auto tracker : {TrackerChoice::kKiou, TrackerChoice::kByte}) {
    for (const auto fusion : {Fusion::kNone, Fusion::kDf, Fusion::kTf, Fusion::kDfTf}) {
      PipelineSpec s = base;
      s.tracker = tracker;
      s.tracking.tracker = tracker == TrackerChoice::kByte ? tracking::TrackerKind::kByte
                                                           : tracking::TrackerKind::kKiou;
      s.tracking.fusion = fusion;
      out.push_back(s);
    }
  }
  for (const auto fusion : {Fusion::kNone, Fusion::kTf}) {
    PipelineSpec s = base;
    s.tracker = TrackerChoice::kGtTracklets;
    s.tracking.tracker = tracking::TrackerKind::kKiou;
    s.tracking.fusion = fusion;
    out.push_back(s);
  }
  return out;
}

SceneRun run_scene(const Scene& scene, const SyncConfig& sync, std::span<const PipelineSpec> specs, int jobs) {
  SceneRun run;
  run.sync = synchronize(scene, sync);
  const auto reference = reference_labels(scene, run.sync.timestamps);
  run.pipelines.resize(specs.size());
  parallel_for(specs.size(), jobs, [&](std::size_t i) {
    auto& out = run.pipelines[i];
    out.spec = specs[i];
    const auto trajectories = run_tracker(out.spec, scene.detections, scene.labels, run.sync.timestamps);
    out.predictions = trajectories_to_labels(trajectories);
    out.evaluation = evaluate_labels(reference, out.predictions, out.spec.eval, out.spec.name(), scene.name);
  });
  return run;
}

}  // namespace roadtrack::pipeline
