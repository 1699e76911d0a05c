#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace roadtrack {

// EB travels toward +x and occupies y > 0; WB travels toward -x and occupies y < 0.
enum class Direction { kEB, kWB };

enum class VehicleClass { kSedan, kMidsize, kVan, kPickup, kSemi, kTruck };
inline constexpr int kNumClasses = 6;

std::string_view to_string(Direction d);
std::string_view to_string(VehicleClass c);
Direction parse_direction(std::string_view s);
VehicleClass parse_vehicle_class(std::string_view s);

inline double direction_sign(Direction d) { return d == Direction::kEB ? 1.0 : -1.0; }

struct ImagePoint {
  double u = 0.0;
  double v = 0.0;
};

struct RoadPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Axis-aligned footprint rectangle on the road plane.
struct Footprint {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
};

/// 3D box in roadway coordinates. (x, y) is the rear-bottom-center; the box
/// extends l feet from the rear along the direction of travel.
struct Box3D {
  double x = 0.0;
  double y = 0.0;
  double l = 1.0;
  double w = 1.0;
  double h = 1.0;
  Direction direction = Direction::kEB;
  VehicleClass cls = VehicleClass::kSedan;

  bool operator==(const Box3D&) const = default;
};

Footprint footprint(const Box3D& b);

/// Corners: rear-bottom-left, rear-bottom-right, front-bottom-right,
/// front-bottom-left, then the same four at height h. Left/right are taken
/// facing the direction of travel.
std::array<RoadPoint, 8> box_corners(const Box3D& b);

/// 1-indexed lane, lane 1 nearest the median (|y| in [0, lane_width)).
int lane_index(double y, double lane_width = 12.0);

using ObjectId = std::int64_t;

}  // namespace roadtrack
