#include "roadtrack/evaluation/report.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "roadtrack/core/error.hpp"
#include "roadtrack/io/csv.hpp"

namespace roadtrack::evaluation {

SceneEvaluation evaluate(std::span<const ObjectTrack> gt, std::span<const ObjectTrack> pred,
                         const EvalConfig& config) {
  config.validate();
  SceneEvaluation out;
  const AlignedSequence seq = align(gt, pred, config);
  if (seq.empty()) spdlog::warn("evaluation: ground truth and predictions share no ticks");
  out.frames = seq.size();
  const MatchedSequence matches = match_frames(seq, config.iou_threshold);
  out.clearmot = clearmot(seq, matches);
  out.hota = hota(seq, config.hota_thresholds);
  out.timespace = emit_timespace(seq, matches);

  MetricsRow& r = out.row;
  const ClearMotResult& c = out.clearmot;
  r.hota = 100.0 * out.hota.hota_mean;
  r.det_a = 100.0 * out.hota.det_a_mean;
  r.ass_a = 100.0 * out.hota.ass_a_mean;
  for (std::size_t a = 0; a < out.hota.alphas.size(); ++a) {
    if (std::abs(out.hota.alphas[a] - config.iou_threshold) < 1e-9) {
      r.hota_at_threshold = 100.0 * out.hota.hota[a];
    }
  }
  r.mota = c.mota;
  r.motp = c.motp;
  r.recall = c.recall;
  r.precision = c.precision;
  r.gt_pct = c.gt_pct;
  r.pred_pct = c.pred_pct;
  r.mt_pct = c.mt_pct;
  r.ml_pct = c.ml_pct;
  r.switches_per_gt = c.switches_per_gt;
  r.id_switches = c.id_switches;
  return out;
}

namespace {

template <class F>
void for_each_metric(MetricsRow& r, F&& f) {
  f("HOTA", r.hota);
  f("DetA", r.det_a);
  f("AssA", r.ass_a);
  f("HOTA_at_threshold", r.hota_at_threshold);
  f("MOTA", r.mota);
  f("MOTP", r.motp);
  f("Rec", r.recall);
  f("Prec", r.precision);
  f("GT_pct", r.gt_pct);
  f("Pred_pct", r.pred_pct);
  f("MT", r.mt_pct);
  f("ML", r.ml_pct);
  f("Sw_per_GT", r.switches_per_gt);
}

nlohmann::ordered_json row_json(MetricsRow r) {
  nlohmann::ordered_json j;
  j["pipeline"] = r.pipeline;
  j["scene"] = r.scene;
  for_each_metric(r, [&](const char* name, double v) { j[name] = v; });
  j["switches"] = r.id_switches;
  return j;
}

}  // namespace

std::vector<MetricsRow> MetricsReport::aggregate() const {
  std::map<std::string, std::vector<MetricsRow>> by_pipeline;
  for (const auto& r : rows) by_pipeline[r.pipeline].push_back(r);
  std::vector<MetricsRow> out;
  for (auto& [name, group] : by_pipeline) {
    MetricsRow m;
    m.pipeline = name;
    m.scene = "all";
    for (MetricsRow& r : group) {
      m.id_switches += r.id_switches;
      std::vector<double> vals;
      for_each_metric(r, [&](const char*, double v) { vals.push_back(v); });
      std::size_t k = 0;
      for_each_metric(m, [&](const char*, double& acc) { acc += vals[k++]; });
    }
    const double n = static_cast<double>(group.size());
    for_each_metric(m, [&](const char*, double& acc) { acc /= n; });
    out.push_back(m);
  }
  return out;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) j["rows"].push_back(row_json(r));
  j["aggregate"] = nlohmann::ordered_json::array();
  for (const auto& r : aggregate()) j["aggregate"].push_back(row_json(r));
  return j.dump(2) + "\n";
}

std::string MetricsReport::to_csv() const {
  std::ostringstream os;
  os << "pipeline,scene";
  MetricsRow header;
  for_each_metric(header, [&](const char* name, double) { os << ',' << name; });
  os << ",switches\n";
  auto emit = [&](MetricsRow r) {
    os << r.pipeline << ',' << r.scene;
    for_each_metric(r, [&](const char*, double v) { os << ',' << io::fmt_exact(v); });
    os << ',' << r.id_switches << '\n';
  };
  for (const auto& r : rows) emit(r);
  for (const auto& r : aggregate()) emit(r);
  return os.str();
}

MetricsReport MetricsReport::from_csv(const std::string& text, const std::string& origin) {
  std::vector<std::string> header{"pipeline", "scene"};
  MetricsRow probe;
  for_each_metric(probe, [&](const char* name, double) { header.emplace_back(name); });
  header.emplace_back("switches");
  const auto t = io::parse_csv(text, origin);
  io::expect_header(t, header);
  MetricsReport out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    MetricsRow r;
    r.pipeline = io::field(t, i, 0);
    r.scene = io::field(t, i, 1);
    std::size_t col = 2;
    for_each_metric(r, [&](const char*, double& v) { v = io::field_double(t, i, col++); });
    r.id_switches = static_cast<long>(io::field_int(t, i, col));
    if (r.scene != "all") out.rows.push_back(r);
  }
  return out;
}

std::string timespace_csv(std::span<const TimeSpacePoint> points) {
  std::ostringstream os;
  os << "direction,lane,t,x,id,status\n";
  for (const auto& p : points) {
    os << to_string(p.direction) << ',' << p.lane << ',' << fmt::format("{:.3f}", p.t) << ','
       << fmt::format("{:.6g}", p.x) << ',' << p.id << ',' << to_string(p.status) << '\n';
  }
  return os.str();
}

std::vector<TimeSpacePoint> parse_timespace_csv(const std::string& text, const std::string& origin) {
  const auto t = io::parse_csv(text, origin);
  io::expect_header(t, {"direction", "lane", "t", "x", "id", "status"});
  std::vector<TimeSpacePoint> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    TimeSpacePoint p;
    try {
      p.direction = parse_direction(io::field(t, i, 0));
      p.status = parse_point_status(io::field(t, i, 5));
    } catch (const Error& e) {
      io::fail_row(t, i, e.what());
    }
    p.lane = static_cast<int>(io::field_int(t, i, 1));
    p.t = io::field_double(t, i, 2);
    p.x = io::field_double(t, i, 3);
    p.id = io::field_int(t, i, 4);
    out.push_back(p);
  }
  return out;
}

}  // namespace roadtrack::evaluation
