#include "roadtrack/pipeline/scene.hpp"

#include <algorithm>
#include <filesystem>

#include <fmt/format.h>

#include "roadtrack/core/error.hpp"
#include "roadtrack/core/parallel.hpp"
#include "roadtrack/core/rng.hpp"
#include "roadtrack/io/csv.hpp"
#include "roadtrack/simulator/cameras.hpp"
#include "roadtrack/simulator/detections.hpp"
#include "roadtrack/simulator/render.hpp"
#include "roadtrack/simulator/survey.hpp"
#include "roadtrack/simulator/traffic.hpp"

namespace fs = std::filesystem;

namespace roadtrack::pipeline {

namespace {

constexpr std::uint64_t kAnnotationStream = 4;
const char* const kTruthCamera = "truth";

}  // namespace

std::string direction_tag(Direction d) { return std::string(to_string(d)); }

evaluation::ProjectionMap Scene::projection_map(bool with_curve) const {
  evaluation::ProjectionMap out;
  for (const auto& [key, tf] : transforms) {
    evaluation::CameraModel m;
    m.projection = tf.projection;
    if (with_curve) {
      const auto it = curves.find(key);
      if (it != curves.end()) m.curve = it->second;
    }
    out.emplace(key, m);
  }
  return out;
}

Scene simulate_scene(const simulator::SceneConfig& cfg, int jobs) {
  using namespace simulator;
  const SceneTruth truth = generate_scene(cfg);
  const std::vector<SimCamera> cams = make_cameras(cfg);
  const auto surveyed = survey_scene(cfg, cams);

  Scene scene;
  scene.name = cfg.name;
  scene.config = cfg;
  for (const auto& [key, sc] : surveyed) {
    io::TransformFile tf{sc.calibration.h, sc.calibration.projection};
    tf.projection.front_sign = io::infer_front_sign(tf.h, tf.projection.p);
    scene.transforms.emplace(key, tf);
    scene.curves.emplace(key, sc.calibration.curve);
    scene.points.emplace(key, sc.points);
  }

  struct PerCamera {
    std::vector<io::LabelRow> labels;
    std::vector<io::DetectionRow> detections;
    std::vector<io::TimestampRow> stamps;
    std::vector<io::TruthTimestampRow> truth_stamps;
  };
  std::vector<PerCamera> per(cams.size());
  parallel_for(cams.size(), jobs, [&](std::size_t i) {
    const SimCamera& cam = cams[i];
    PerCamera& out = per[i];
    const auto frames = render_camera(truth, cam);
    Rng rng(derive_seed(derive_seed(cfg.seed, kAnnotationStream), static_cast<std::uint64_t>(cam.index)));
    for (const auto& f : frames) {
      out.stamps.push_back({f.frame_index, cam.id, f.t_raw, f.t_raw});
      out.truth_stamps.push_back({cam.id, f.frame_index, f.capture_index, cfg.epoch_base + f.t_true, f.t_raw,
                                  cam.clock_offset, f.residual});
      for (const auto& tb : f.boxes) {
        const auto& cal = surveyed.at({cam.id, tb.box.direction}).calibration;
        RoadPoint p;
        try {
          p = annotate_point(cfg, cam, cal, {tb.box.x, tb.box.y, 0.0}, rng);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kAtInfinity) throw;
          continue;
        }
        Box3D b = tb.box;
        b.x = p.x;
        b.y = p.y;
        out.labels.push_back({f.frame_index, f.t_raw, tb.vehicle, b, cam.id});
      }
    }
    for (const auto& df : corrupt_detections(cfg, cam, frames)) {
      for (const auto& d : df.detections) {
        out.detections.push_back({{df.frame_index, df.t_raw, d.source, d.box, cam.id}, d.confidence});
      }
    }
  });
  for (std::size_t i = 0; i < cams.size(); ++i) {
    auto& p = per[i];
    scene.labels.insert(scene.labels.end(), p.labels.begin(), p.labels.end());
    scene.detections.insert(scene.detections.end(), p.detections.begin(), p.detections.end());
    scene.timestamps.insert(scene.timestamps.end(), p.stamps.begin(), p.stamps.end());
    scene.truth_timestamps.insert(scene.truth_timestamps.end(), p.truth_stamps.begin(), p.truth_stamps.end());
    const SimCamera& c = cams[i];
    scene.cameras.push_back({c.id, c.pole, c.fov_x0, c.fov_x1, c.phase, c.clock_offset});
  }

  // Ground truth on a 30 Hz grid while any part of the vehicle is within
  // kTruthMargin of the road. Camera frames are out of phase with this grid,
  // so a vehicle can be annotated up to a frame before its first on-road
  // tick; the margin keeps such frames covered. Evaluation clips GT to the
  // matched prediction span, so the extra ticks cost nothing.
  constexpr double kTruthMargin = 10.0;
  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) / 30.0;
    if (t >= cfg.duration) break;
    for (const VehicleTruth* v : truth.visible(t, -kTruthMargin, cfg.roadway_length + kTruthMargin)) {
      scene.ground_truth.push_back(
          {k, cfg.epoch_base + t, v->id, v->box(t, cfg.roadway_length), kTruthCamera});
    }
  }
  return scene;
}

namespace {

std::string file_in(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::string transforms_dir(const std::string& dir, const std::string& name) {
  return file_in(dir, name + "_transforms");
}

std::string transform_file(const std::string& tdir, const CameraKey& key, const char* kind) {
  return file_in(tdir, fmt::format("{}_{}_{}.csv", key.first, direction_tag(key.second), kind));
}

}  // namespace

void save_scene(const Scene& scene, const std::string& dir) {
  fs::create_directories(dir);
  const std::string& n = scene.name;
  if (scene.config) io::write_text_file(file_in(dir, "scene.cfg"), scene.config->to_keyvalue().to_string());
  io::write_text_file(file_in(dir, n + "_labels.csv"), io::write_labels(scene.labels));
  io::write_text_file(file_in(dir, n + "_timestamps.csv"), io::write_timestamps(scene.timestamps));
  io::write_text_file(file_in(dir, n + "_detections.csv"), io::write_detections(scene.detections));
  if (!scene.ground_truth.empty()) {
    io::write_text_file(file_in(dir, n + "_gt.csv"), io::write_labels(scene.ground_truth));
  }
  if (!scene.truth_timestamps.empty()) {
    io::write_text_file(file_in(dir, n + "_truth_timestamps.csv"),
                        io::write_truth_timestamps(scene.truth_timestamps));
  }
  if (!scene.cameras.empty()) io::write_text_file(file_in(dir, n + "_cameras.csv"), io::write_cameras(scene.cameras));
  const std::string tdir = transforms_dir(dir, n);
  fs::create_directories(tdir);
  for (const auto& [key, tf] : scene.transforms) {
    io::write_text_file(transform_file(tdir, key, "homography"), io::write_transform(tf));
  }
  for (const auto& [key, c] : scene.curves) io::write_text_file(transform_file(tdir, key, "curve"), io::write_curve(c));
  for (const auto& [key, p] : scene.points) io::write_text_file(transform_file(tdir, key, "points"), io::write_points(p));
}

Scene load_scene(const std::string& dir) {
  if (!fs::is_directory(dir)) fail(ErrorKind::kParseError, fmt::format("'{}' is not a scene directory", dir));
  Scene scene;
  const std::string cfg_path = file_in(dir, "scene.cfg");
  if (fs::exists(cfg_path)) {
    scene.config = simulator::SceneConfig::from_keyvalue(KeyValueConfig::load(cfg_path));
    scene.name = scene.config->name;
  } else {
    bool found = false;
    for (const auto& e : fs::directory_iterator(dir)) {
      const std::string f = e.path().filename().string();
      const std::string suffix = "_labels.csv";
      if (f.size() > suffix.size() && f.ends_with(suffix)) {
        scene.name = f.substr(0, f.size() - suffix.size());
        found = true;
        break;
      }
    }
    if (!found) fail(ErrorKind::kSchemaMismatch, fmt::format("{}: no *_labels.csv file", dir));
  }
  const std::string& n = scene.name;
  auto optional_file = [&](const std::string& f) -> std::optional<std::string> {
    const std::string p = file_in(dir, f);
    if (!fs::exists(p)) return std::nullopt;
    return p;
  };
  scene.labels = io::parse_labels(io::read_text_file(file_in(dir, n + "_labels.csv")), n + "_labels.csv");
  if (auto p = optional_file(n + "_timestamps.csv")) scene.timestamps = io::parse_timestamps(io::read_text_file(*p), *p);
  if (auto p = optional_file(n + "_detections.csv")) scene.detections = io::parse_detections(io::read_text_file(*p), *p);
  if (auto p = optional_file(n + "_gt.csv")) scene.ground_truth = io::parse_labels(io::read_text_file(*p), *p);
  if (auto p = optional_file(n + "_truth_timestamps.csv")) {
    scene.truth_timestamps = io::parse_truth_timestamps(io::read_text_file(*p), *p);
  }
  if (auto p = optional_file(n + "_cameras.csv")) scene.cameras = io::parse_cameras(io::read_text_file(*p), *p);

  const std::string tdir = transforms_dir(dir, n);
  if (fs::is_directory(tdir)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(tdir)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      const std::string f = path.filename().string();
      // {camera}_{EB|WB}_{kind}.csv
      const auto last = f.rfind('_');
      if (last == std::string::npos || !f.ends_with(".csv")) continue;
      const std::string kind = f.substr(last + 1, f.size() - last - 5);
      const auto mid = f.rfind('_', last - 1);
      if (mid == std::string::npos) continue;
      Direction d;
      try {
        d = parse_direction(f.substr(mid + 1, last - mid - 1));
      } catch (const Error&) {
        continue;
      }
      const CameraKey key{f.substr(0, mid), d};
      const std::string text = io::read_text_file(path.string());
      if (kind == "homography") {
        scene.transforms[key] = io::parse_transform(text, path.string());
      } else if (kind == "curve") {
        scene.curves[key] = io::parse_curve(text, path.string());
      } else if (kind == "points") {
        scene.points[key] = io::parse_points(text, path.string());
      }
    }
  }
  return scene;
}

}  // namespace roadtrack::pipeline
