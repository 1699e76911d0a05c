#include "roadtrack/io/formats.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "roadtrack/core/error.hpp"
#include "roadtrack/io/csv.hpp"

namespace roadtrack::io {

namespace {

const std::vector<std::string> kLabelHeader = {"frame_index", "timestamp", "vehicle_id", "vehicle_class",
                                               "x", "y", "length", "width", "height", "direction",
                                               "camera"};

void append_label(std::ostringstream& os, const LabelRow& r) {
  os << r.frame_index << ',' << fmt_exact(r.timestamp) << ',' << r.vehicle_id << ','
     << to_string(r.box.cls) << ',' << fmt_g6(r.box.x) << ',' << fmt_g6(r.box.y) << ','
     << fmt_g6(r.box.l) << ',' << fmt_g6(r.box.w) << ',' << fmt_g6(r.box.h) << ','
     << to_string(r.box.direction) << ',' << r.camera;
}

LabelRow read_label(const CsvTable& t, std::size_t i) {
  LabelRow r;
  r.frame_index = field_int(t, i, 0);
  r.timestamp = field_double(t, i, 1);
  r.vehicle_id = field_int(t, i, 2);
  try {
    r.box.cls = parse_vehicle_class(field(t, i, 3));
    r.box.direction = parse_direction(field(t, i, 9));
  } catch (const Error& e) {
    fail_row(t, i, e.what());
  }
  r.box.x = field_double(t, i, 4);
  r.box.y = field_double(t, i, 5);
  r.box.l = field_double(t, i, 6);
  r.box.w = field_double(t, i, 7);
  r.box.h = field_double(t, i, 8);
  r.camera = field(t, i, 10);
  return r;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

CsvTable table(const std::string& text, const std::string& origin, const std::vector<std::string>& header) {
  CsvTable t = parse_csv(text, origin);
  if (t.header.empty() && t.rows.empty()) {
    fail(ErrorKind::kSchemaMismatch, fmt::format("{}: empty file, expected header", origin));
  }
  expect_header(t, header);
  return t;
}

}  // namespace

std::string write_labels(const std::vector<LabelRow>& rows) {
  std::ostringstream os;
  os << join(kLabelHeader) << '\n';
  for (const auto& r : rows) {
    append_label(os, r);
    os << '\n';
  }
  return os.str();
}

std::vector<LabelRow> parse_labels(const std::string& text, const std::string& origin) {
  const CsvTable t = table(text, origin, kLabelHeader);
  std::vector<LabelRow> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) out.push_back(read_label(t, i));
  return out;
}

std::string write_detections(const std::vector<DetectionRow>& rows) {
  std::ostringstream os;
  os << join(kLabelHeader) << ",confidence\n";
  for (const auto& r : rows) {
    append_label(os, r.label);
    os << ',' << fmt_g6(r.confidence) << '\n';
  }
  return os.str();
}

std::vector<DetectionRow> parse_detections(const std::string& text, const std::string& origin) {
  auto header = kLabelHeader;
  header.push_back("confidence");
  const CsvTable t = table(text, origin, header);
  std::vector<DetectionRow> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out.push_back({read_label(t, i), field_double(t, i, 11)});
  }
  return out;
}

namespace {
std::vector<std::string> resampled_header() {
  auto h = kLabelHeader;
  const char* names[8] = {"rbl", "rbr", "fbr", "fbl", "rtl", "rtr", "ftr", "ftl"};
  for (const char* n : names) {
    h.push_back(fmt::format("{}_x", n));
    h.push_back(fmt::format("{}_y", n));
  }
  return h;
}
}  // namespace

std::string write_resampled(const std::vector<ResampledRow>& rows) {
  std::ostringstream os;
  os << join(resampled_header()) << '\n';
  for (const auto& r : rows) {
    append_label(os, r.label);
    for (double p : r.pixels) os << ',' << fmt_g6(p);
    os << '\n';
  }
  return os.str();
}

std::vector<ResampledRow> parse_resampled(const std::string& text, const std::string& origin) {
  const CsvTable t = table(text, origin, resampled_header());
  std::vector<ResampledRow> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    ResampledRow r;
    r.label = read_label(t, i);
    for (std::size_t k = 0; k < 16; ++k) r.pixels[k] = field_double(t, i, 11 + k);
    out.push_back(r);
  }
  return out;
}

std::string write_timestamps(const std::vector<TimestampRow>& rows) {
  std::ostringstream os;
  os << "frame_index,camera,timestamp,corrected_timestamp\n";
  for (const auto& r : rows) {
    os << r.frame_index << ',' << r.camera << ',' << fmt_stamp(r.timestamp) << ','
       << fmt_exact(r.corrected_timestamp) << '\n';
  }
  return os.str();
}

std::vector<TimestampRow> parse_timestamps(const std::string& text, const std::string& origin) {
  const CsvTable t = table(text, origin, {"frame_index", "camera", "timestamp", "corrected_timestamp"});
  std::vector<TimestampRow> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out.push_back({field_int(t, i, 0), field(t, i, 1), field_double(t, i, 2), field_double(t, i, 3)});
  }
  return out;
}

std::string write_truth_timestamps(const std::vector<TruthTimestampRow>& rows) {
  std::ostringstream os;
  os << "camera,frame_index,capture_index,true_time,timestamp,offset,residual\n";
  for (const auto& r : rows) {
    os << r.camera << ',' << r.frame_index << ',' << r.capture_index << ',' << fmt_exact(r.true_time)
       << ',' << fmt_stamp(r.timestamp) << ',' << fmt_exact(r.offset) << ',' << fmt_exact(r.residual)
       << '\n';
  }
  return os.str();
}

std::vector<TruthTimestampRow> parse_truth_timestamps(const std::string& text, const std::string& origin) {
  const CsvTable t = table(
      text, origin, {"camera", "frame_index", "capture_index", "true_time", "timestamp", "offset", "residual"});
  std::vector<TruthTimestampRow> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out.push_back({field(t, i, 0), field_int(t, i, 1), field_int(t, i, 2), field_double(t, i, 3),
                   field_double(t, i, 4), field_double(t, i, 5), field_double(t, i, 6)});
  }
  return out;
}

std::string write_cameras(const std::vector<CameraRow>& rows) {
  std::ostringstream os;
  os << "camera,pole,fov_x0,fov_x1,phase,clock_offset\n";
  for (const auto& r : rows) {
    os << r.camera << ',' << r.pole << ',' << fmt_exact(r.fov_x0) << ',' << fmt_exact(r.fov_x1) << ','
       << fmt_exact(r.phase) << ',' << fmt_exact(r.clock_offset) << '\n';
  }
  return os.str();
}

std::vector<CameraRow> parse_cameras(const std::string& text, const std::string& origin) {
  const CsvTable t = table(text, origin, {"camera", "pole", "fov_x0", "fov_x1", "phase", "clock_offset"});
  std::vector<CameraRow> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out.push_back({field(t, i, 0), static_cast<int>(field_int(t, i, 1)), field_double(t, i, 2),
                   field_double(t, i, 3), field_double(t, i, 4), field_double(t, i, 5)});
  }
  return out;
}

double infer_front_sign(const geometry::Homography& h, const Eigen::Matrix<double, 3, 4>& p) {
  const Eigen::Vector3d q = h.m * Eigen::Vector3d(1920.0, 1080.0, 1.0);
  const Eigen::Vector4d road(q.x() / q.z(), q.y() / q.z(), 0.0, 1.0);
  const double w = (p * road).z();
  return w < 0.0 ? -1.0 : 1.0;
}

std::string write_transform(const TransformFile& t) {
  std::string out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out += (r + c == 0 ? "" : ",") + fmt_exact(t.h.m(r, c));
  }
  out += '\n';
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) out += (r + c == 0 ? "" : ",") + fmt_exact(t.projection.p(r, c));
  }
  out += '\n';
  return out;
}

TransformFile parse_transform(const std::string& text, const std::string& origin) {
  const CsvTable t = parse_csv(text, origin, false);
  if (t.rows.size() != 2 || t.rows[0].size() != 9 || t.rows[1].size() != 12) {
    fail(ErrorKind::kSchemaMismatch, fmt::format("{}: expected a 9-value line and a 12-value line", origin));
  }
  TransformFile f;
  for (int k = 0; k < 9; ++k) f.h.m(k / 3, k % 3) = field_double(t, 0, k);
  for (int k = 0; k < 12; ++k) f.projection.p(k / 4, k % 4) = field_double(t, 1, k);
  f.projection.front_sign = infer_front_sign(f.h, f.projection.p);
  return f;
}

std::string write_curve(const geometry::CurveOffset& c) {
  return fmt::format("{},{},{}\n", fmt_exact(c.c2), fmt_exact(c.c1), fmt_exact(c.c0));
}

geometry::CurveOffset parse_curve(const std::string& text, const std::string& origin) {
  const CsvTable t = parse_csv(text, origin, false);
  if (t.rows.empty() || t.rows[0].size() < 3) {
    fail(ErrorKind::kSchemaMismatch, fmt::format("{}: expected three coefficients on the first row", origin));
  }
  return {field_double(t, 0, 0), field_double(t, 0, 1), field_double(t, 0, 2)};
}

std::string write_points(const geometry::CalibrationPoints& pts) {
  std::ostringstream os;
  os << "kind,id,u,v,x,y,z\n";
  auto row = [&](const char* kind, std::size_t id, const ImagePoint& im, double x, double y, double z) {
    os << kind << ',' << id << ',' << fmt_exact(im.u) << ',' << fmt_exact(im.v) << ',' << fmt_exact(x)
       << ',' << fmt_exact(y) << ',' << fmt_exact(z) << '\n';
  };
  for (std::size_t i = 0; i < pts.ground.size(); ++i) {
    row("ground", i, pts.ground[i].image, pts.ground[i].road.x, pts.ground[i].road.y, 0.0);
  }
  for (std::size_t i = 0; i < pts.lane.size(); ++i) row("lane", i, pts.lane[i], 0.0, 0.0, 0.0);
  for (std::size_t i = 0; i < pts.verticals.size(); ++i) {
    row("vline", i, pts.verticals[i].a, 0.0, 0.0, 0.0);
    row("vline", i, pts.verticals[i].b, 0.0, 0.0, 0.0);
  }
  for (std::size_t i = 0; i < pts.heights.size(); ++i) {
    const auto& h = pts.heights[i];
    row("height", i, h.image, h.road.x, h.road.y, h.road.z);
  }
  return os.str();
}

geometry::CalibrationPoints parse_points(const std::string& text, const std::string& origin) {
  const CsvTable t = table(text, origin, {"kind", "id", "u", "v", "x", "y", "z"});
  geometry::CalibrationPoints pts;
  std::map<std::int64_t, std::vector<ImagePoint>> vlines;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string& kind = field(t, i, 0);
    const std::int64_t id = field_int(t, i, 1);
    const ImagePoint im{field_double(t, i, 2), field_double(t, i, 3)};
    const double x = field_double(t, i, 4), y = field_double(t, i, 5), z = field_double(t, i, 6);
    if (kind == "ground") {
      pts.ground.push_back({im, {x, y}});
    } else if (kind == "lane") {
      pts.lane.push_back(im);
    } else if (kind == "vline") {
      vlines[id].push_back(im);
    } else if (kind == "height") {
      pts.heights.push_back({{x, y, z}, im});
    } else {
      fail_row(t, i, fmt::format("unknown point kind '{}'", kind));
    }
  }
  for (const auto& [id, ends] : vlines) {
    if (ends.size() != 2) {
      fail(ErrorKind::kParseError, fmt::format("{}: vline {} needs exactly two endpoints", origin, id));
    }
    pts.verticals.push_back({ends[0], ends[1]});
  }
  return pts;
}

}  // namespace roadtrack::io
