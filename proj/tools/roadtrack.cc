// roadtrack command-line front end.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "roadtrack/core/error.hpp"
#include "roadtrack/core/keyvalue.hpp"
#include "roadtrack/geometry/calibration.hpp"
#include "roadtrack/io/csv.hpp"
#include "roadtrack/io/formats.hpp"
#include "roadtrack/pipeline/evaluate.hpp"
#include "roadtrack/pipeline/scene.hpp"
#include "roadtrack/pipeline/sync.hpp"
#include "roadtrack/pipeline/track.hpp"
#include "roadtrack/simulator/config.hpp"

namespace fs = std::filesystem;
using namespace roadtrack;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  int jobs = 1;
  bool verbose = false;
};

KeyValueConfig load_config(const Globals& g) {
  return g.config.empty() ? KeyValueConfig{} : KeyValueConfig::load(g.config);
}

// Keys starting with `prefix` (stripped) and the remaining keys.
std::pair<KeyValueConfig, KeyValueConfig> split_prefix(const KeyValueConfig& kv, const std::string& prefix) {
  KeyValueConfig with, rest;
  for (const auto& [k, v] : kv.values()) {
    if (k.rfind(prefix, 0) == 0) {
      with.set(k.substr(prefix.size()), v);
    } else {
      rest.set(k, v);
    }
  }
  return {with, rest};
}

std::string out_path(const Globals& g, const std::string& file) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / file).string();
}

std::string stages_json(const pipeline::SyncResult& r) {
  nlohmann::ordered_json j;
  j["offsets"] = nlohmann::ordered_json::object();
  for (const auto& [cam, o] : r.offsets) j["offsets"][cam] = o;
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : r.stages) {
    j["stages"].push_back({{"stage", s.stage},
                           {"ccde_x", s.ccde_x},
                           {"ccde_y", s.ccde_y},
                           {"ccpe", s.ccpe},
                           {"pairs", s.pairs}});
  }
  j["degenerate_frames"] = r.degenerate_frames;
  return j.dump(2) + "\n";
}

int cmd_simulate(const Globals& g, const std::string& preset) {
  KeyValueConfig kv = load_config(g);
  if (!preset.empty() && !kv.has("regime")) kv.set("regime", preset);
  auto cfg = simulator::SceneConfig::from_keyvalue(kv);
  if (g.seed) cfg.seed = *g.seed;
  cfg.validate();
  const auto scene = pipeline::simulate_scene(cfg, g.jobs);
  pipeline::save_scene(scene, g.out);
  spdlog::info("scene '{}' written to {}: {} labels, {} detections, {} frames", scene.name, g.out,
               scene.labels.size(), scene.detections.size(), scene.timestamps.size());
  return 0;
}

int cmd_calibrate(const Globals& g, const std::vector<std::string>& inputs) {
  for (const auto& in : inputs) {
    const auto pts = io::parse_points(io::read_text_file(in), in);
    const auto cal = geometry::calibrate(pts);
    std::string stem = fs::path(in).filename().string();
    for (const std::string suffix : {"_points.csv", ".csv"}) {
      if (stem.size() > suffix.size() && stem.ends_with(suffix)) {
        stem.resize(stem.size() - suffix.size());
        break;
      }
    }
    io::TransformFile tf{cal.h, cal.projection};
    io::write_text_file(out_path(g, stem + "_homography.csv"), io::write_transform(tf));
    io::write_text_file(out_path(g, stem + "_curve.csv"), io::write_curve(cal.curve));
    spdlog::info("{}: homography RMSE {:.4f} ft", in, cal.homography_rmse_ft);
  }
  return 0;
}

pipeline::Scene scene_from_inputs(const std::string& scene_dir, const std::string& labels,
                                  const std::string& timestamps) {
  if (!scene_dir.empty()) return pipeline::load_scene(scene_dir);
  if (labels.empty() || timestamps.empty()) {
    fail(ErrorKind::kValidationError, "need --scene, or both --labels and --timestamps");
  }
  pipeline::Scene s;
  s.name = fs::path(labels).stem().string();
  s.labels = io::parse_labels(io::read_text_file(labels), labels);
  s.timestamps = io::parse_timestamps(io::read_text_file(timestamps), timestamps);
  return s;
}

int cmd_sync(const Globals& g, const std::string& scene_dir, const std::string& labels,
             const std::string& timestamps) {
  const auto cfg = pipeline::SyncConfig::from_keyvalue(load_config(g));
  const auto scene = scene_from_inputs(scene_dir, labels, timestamps);
  const auto r = pipeline::synchronize(scene, cfg);
  io::write_text_file(out_path(g, scene.name + "_timestamps.csv"), io::write_timestamps(r.timestamps));
  io::write_text_file(out_path(g, scene.name + "_sync.json"), stages_json(r));
  io::write_text_file(out_path(g, scene.name + "_resampled.csv"),
                      io::write_resampled(pipeline::resampled_labels(scene, r.timestamps)));
  for (const auto& s : r.stages) {
    spdlog::info("{:>10}: CCDE_x {:.3f} ft, CCDE_y {:.3f} ft, CCPE {:.2f} px ({} pairs)", s.stage, s.ccde_x,
                 s.ccde_y, s.ccpe, s.pairs);
  }
  return 0;
}

int cmd_track(const Globals& g, const std::string& scene_dir, const std::string& timestamps,
              const std::string& detections) {
  const auto [sync_kv, rest] = split_prefix(load_config(g), "sync.");
  const auto spec = pipeline::PipelineSpec::from_keyvalue(rest);
  if (scene_dir.empty()) fail(ErrorKind::kValidationError, "track needs --scene");
  auto scene = pipeline::load_scene(scene_dir);
  if (spec.detector_source == pipeline::DetectorSource::kCsv) {
    if (detections.empty()) fail(ErrorKind::kValidationError, "detector_source = csv needs --detections");
    scene.detections = io::parse_detections(io::read_text_file(detections), detections);
  }
  std::vector<io::TimestampRow> corrected;
  if (!timestamps.empty()) {
    corrected = io::parse_timestamps(io::read_text_file(timestamps), timestamps);
  } else {
    corrected = pipeline::synchronize(scene, pipeline::SyncConfig::from_keyvalue(sync_kv)).timestamps;
  }
  const auto trajectories = pipeline::run_tracker(spec, scene.detections, scene.labels, corrected);
  const auto labels = pipeline::trajectories_to_labels(trajectories);
  const std::string path = out_path(g, scene.name + "_" + spec.name() + "_pred.csv");
  io::write_text_file(path, io::write_labels(labels));
  spdlog::info("{}: {} trajectories written to {}", spec.name(), trajectories.size(), path);
  return 0;
}

int cmd_eval(const Globals& g, const std::string& gt_path, const std::string& pred_path,
             const std::string& pipeline_name, const std::string& scene_name) {
  const auto cfg = evaluation::EvalConfig::from_keyvalue(load_config(g));
  const auto gt = io::parse_labels(io::read_text_file(gt_path), gt_path);
  const auto pred = io::parse_labels(io::read_text_file(pred_path), pred_path);
  const auto ev = pipeline::evaluate_labels(gt, pred, cfg, pipeline_name, scene_name);
  evaluation::MetricsReport report{{ev.row}};
  io::write_text_file(out_path(g, "metrics.json"), report.to_json());
  io::write_text_file(out_path(g, "metrics.csv"), report.to_csv());
  io::write_text_file(out_path(g, "timespace.csv"), evaluation::timespace_csv(ev.timespace));
  spdlog::info("HOTA {:.2f}  MOTA {:.2f}  Rec {:.2f}  Prec {:.2f}  switches {}", ev.row.hota, ev.row.mota,
               ev.row.recall, ev.row.precision, ev.row.id_switches);
  return 0;
}

int cmd_report(const Globals& g, const std::vector<std::string>& scenes, const std::vector<std::string>& only) {
  const auto [sync_kv, rest] = split_prefix(load_config(g), "sync.");
  const auto sync_cfg = pipeline::SyncConfig::from_keyvalue(sync_kv);
  const auto base = pipeline::PipelineSpec::from_keyvalue(rest);
  std::vector<pipeline::PipelineSpec> specs;
  for (const auto& s : pipeline::pipeline_grid(base)) {
    if (only.empty() || std::find(only.begin(), only.end(), s.name()) != only.end()) specs.push_back(s);
  }
  if (specs.empty()) fail(ErrorKind::kValidationError, "no pipeline matches --pipeline");
  evaluation::MetricsReport report;
  for (const auto& dir : scenes) {
    const auto scene = pipeline::load_scene(dir);
    const auto run = pipeline::run_scene(scene, sync_cfg, specs, g.jobs);
    io::write_text_file(out_path(g, scene.name + "_sync.json"), stages_json(run.sync));
    for (const auto& p : run.pipelines) {
      report.rows.push_back(p.evaluation.row);
      io::write_text_file(out_path(g, scene.name + "_" + p.spec.name() + "_timespace.csv"),
                          evaluation::timespace_csv(p.evaluation.timespace));
      spdlog::info("{} {:>14}: HOTA {:6.2f}  MOTA {:7.2f}  Sw/GT {:.3f}", scene.name, p.spec.name(),
                   p.evaluation.row.hota, p.evaluation.row.mota, p.evaluation.row.switches_per_gt);
    }
  }
  io::write_text_file(out_path(g, "report.json"), report.to_json());
  io::write_text_file(out_path(g, "report.csv"), report.to_csv());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-camera roadway tracking: calibration, clock sync, tracking and evaluation"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "key = value configuration file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "random seed (simulate)");
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_flag("-v,--verbose", g.verbose, "debug logging");

  std::string preset;
  auto* sim = app.add_subcommand("simulate", "generate a synthetic scene directory");
  sim->add_option("--preset", preset, "free_flow, slow or congested");

  std::vector<std::string> points;
  auto* cal = app.add_subcommand("calibrate", "fit homography, projection and curve from survey points");
  cal->add_option("points", points, "points csv files")->required()->check(CLI::ExistingFile);

  std::string scene_dir, labels, timestamps, detections;
  auto* sync = app.add_subcommand("sync", "estimate clock offsets and frame residuals");
  sync->add_option("--scene", scene_dir, "scene directory")->check(CLI::ExistingDirectory);
  sync->add_option("--labels", labels, "labels csv")->check(CLI::ExistingFile);
  sync->add_option("--timestamps", timestamps, "timestamps csv")->check(CLI::ExistingFile);

  auto* track = app.add_subcommand("track", "run one tracking pipeline on a scene");
  track->add_option("--scene", scene_dir, "scene directory")->required()->check(CLI::ExistingDirectory);
  track->add_option("--timestamps", timestamps, "corrected timestamps csv (default: run sync)")
      ->check(CLI::ExistingFile);
  track->add_option("--detections", detections, "detections csv for detector_source = csv")
      ->check(CLI::ExistingFile);

  std::string gt_path, pred_path, pipeline_name = "pred", scene_name = "scene";
  auto* ev = app.add_subcommand("eval", "score predicted labels against ground truth");
  ev->add_option("--gt", gt_path, "ground-truth labels csv")->required()->check(CLI::ExistingFile);
  ev->add_option("--pred", pred_path, "predicted labels csv")->required()->check(CLI::ExistingFile);
  ev->add_option("--pipeline", pipeline_name, "pipeline name for the report")->capture_default_str();
  ev->add_option("--scene-name", scene_name, "scene name for the report")->capture_default_str();

  std::vector<std::string> scenes, only;
  auto* rep = app.add_subcommand("report", "run the pipeline grid on scenes and tabulate metrics");
  rep->add_option("scenes", scenes, "scene directories")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--pipeline", only, "restrict to these pipeline names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::kValidationError);
  }
  if (seed_opt->count() > 0) g.seed = seed;
  spdlog::set_level(g.verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (sim->parsed()) return cmd_simulate(g, preset);
    if (cal->parsed()) return cmd_calibrate(g, points);
    if (sync->parsed()) return cmd_sync(g, scene_dir, labels, timestamps);
    if (track->parsed()) return cmd_track(g, scene_dir, timestamps, detections);
    if (ev->parsed()) return cmd_eval(g, gt_path, pred_path, pipeline_name, scene_name);
    if (rep->parsed()) return cmd_report(g, scenes, only);
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return exit_code(ErrorKind::kParseError);
  }
  return 0;
}
