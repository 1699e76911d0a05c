#include "roadtrack/core/types.hpp"

#include <cmath>

#include "roadtrack/core/error.hpp"

namespace roadtrack {

namespace {
constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "sedan", "midsize", "van", "pickup", "semi", "truck"};
}

std::string_view to_string(Direction d) { return d == Direction::kEB ? "EB" : "WB"; }

std::string_view to_string(VehicleClass c) { return kClassNames[static_cast<int>(c)]; }

Direction parse_direction(std::string_view s) {
  if (s == "EB") return Direction::kEB;
  if (s == "WB") return Direction::kWB;
  fail(ErrorKind::kParseError, "unknown direction '" + std::string(s) + "'");
}

VehicleClass parse_vehicle_class(std::string_view s) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (kClassNames[i] == s) return static_cast<VehicleClass>(i);
  }
  fail(ErrorKind::kParseError, "unknown vehicle class '" + std::string(s) + "'");
}

Footprint footprint(const Box3D& b) {
  Footprint f;
  if (b.direction == Direction::kEB) {
    f.x0 = b.x;
    f.x1 = b.x + b.l;
  } else {
    f.x0 = b.x - b.l;
    f.x1 = b.x;
  }
  f.y0 = b.y - 0.5 * b.w;
  f.y1 = b.y + 0.5 * b.w;
  return f;
}

std::array<RoadPoint, 8> box_corners(const Box3D& b) {
  const double s = direction_sign(b.direction);
  const double hw = 0.5 * b.w;
  std::array<RoadPoint, 8> c;
  c[0] = {b.x, b.y + s * hw, 0.0};
  c[1] = {b.x, b.y - s * hw, 0.0};
  c[2] = {b.x + s * b.l, b.y - s * hw, 0.0};
  c[3] = {b.x + s * b.l, b.y + s * hw, 0.0};
  for (int i = 0; i < 4; ++i) {
    c[i + 4] = c[i];
    c[i + 4].z = b.h;
  }
  return c;
}

int lane_index(double y, double lane_width) {
  return static_cast<int>(std::floor(std::abs(y) / lane_width)) + 1;
}

}  // namespace roadtrack
