#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "roadtrack/core/types.hpp"
#include "roadtrack/geometry/curve.hpp"
#include "roadtrack/geometry/homography.hpp"
#include "roadtrack/geometry/projection.hpp"
#include "roadtrack/geometry/calibration.hpp"

namespace roadtrack::io {

/// One row of a labels file. `box` carries class and direction.
struct LabelRow {
  std::int64_t frame_index = 0;
  double timestamp = 0.0;
  ObjectId vehicle_id = 0;
  Box3D box;
  std::string camera;
  bool operator==(const LabelRow&) const = default;
};

struct DetectionRow {
  LabelRow label;
  double confidence = 1.0;
  bool operator==(const DetectionRow&) const = default;
};

struct ResampledRow {
  LabelRow label;
  std::array<double, 16> pixels{};  // (u, v) per corner in box_corners() order
  bool operator==(const ResampledRow&) const = default;
};

struct TimestampRow {
  std::int64_t frame_index = 0;
  std::string camera;
  double timestamp = 0.0;            // as reported, 0.01 s resolution
  double corrected_timestamp = 0.0;
  bool operator==(const TimestampRow&) const = default;
};

/// Simulator ground truth for each emitted frame.
struct TruthTimestampRow {
  std::string camera;
  std::int64_t frame_index = 0;
  std::int64_t capture_index = 0;
  double true_time = 0.0;  // epoch seconds
  double timestamp = 0.0;
  double offset = 0.0;
  double residual = 0.0;
  bool operator==(const TruthTimestampRow&) const = default;
};

struct CameraRow {
  std::string camera;
  int pole = 0;
  double fov_x0 = 0.0, fov_x1 = 0.0;
  double phase = 0.0;
  double clock_offset = 0.0;
  bool operator==(const CameraRow&) const = default;
};

std::string write_labels(const std::vector<LabelRow>& rows);
std::vector<LabelRow> parse_labels(const std::string& text, const std::string& origin = "<labels>");

std::string write_detections(const std::vector<DetectionRow>& rows);
std::vector<DetectionRow> parse_detections(const std::string& text,
                                           const std::string& origin = "<detections>");

std::string write_resampled(const std::vector<ResampledRow>& rows);
std::vector<ResampledRow> parse_resampled(const std::string& text,
                                          const std::string& origin = "<resampled>");

std::string write_timestamps(const std::vector<TimestampRow>& rows);
std::vector<TimestampRow> parse_timestamps(const std::string& text,
                                           const std::string& origin = "<timestamps>");

std::string write_truth_timestamps(const std::vector<TruthTimestampRow>& rows);
std::vector<TruthTimestampRow> parse_truth_timestamps(const std::string& text,
                                                      const std::string& origin = "<truth>");

std::string write_cameras(const std::vector<CameraRow>& rows);
std::vector<CameraRow> parse_cameras(const std::string& text, const std::string& origin = "<cameras>");

/// Two lines: the 9 entries of H (image -> road), then the 12 entries of P.
/// Values are written in shortest round-trip form.
struct TransformFile {
  geometry::Homography h;
  geometry::CameraProjection projection;
  bool operator==(const TransformFile& o) const {
    return h.m == o.h.m && projection.p == o.projection.p && projection.front_sign == o.projection.front_sign;
  }
};
std::string write_transform(const TransformFile& t);
TransformFile parse_transform(const std::string& text, const std::string& origin = "<homography>");

/// One row: c2, c1, c0.
std::string write_curve(const geometry::CurveOffset& c);
geometry::CurveOffset parse_curve(const std::string& text, const std::string& origin = "<curve>");

/// Survey points for one (camera, direction). kind is ground (u, v, x, y),
/// lane (u, v), vline (segment id, endpoint u, v) or height (u, v, x, y, z).
std::string write_points(const geometry::CalibrationPoints& pts);
geometry::CalibrationPoints parse_points(const std::string& text, const std::string& origin = "<points>");

/// The in-front sign is not stored in the file; it is the sign of P's
/// homogeneous coordinate at the road point seen at the image center.
double infer_front_sign(const geometry::Homography& h, const Eigen::Matrix<double, 3, 4>& p);

}  // namespace roadtrack::io
