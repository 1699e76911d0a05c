#pragma once

#include <cstddef>

#include "roadtrack/core/types.hpp"

namespace roadtrack::kernels {

/// Structure-of-arrays view over footprints.
struct FootprintArrays {
  const double* x0 = nullptr;
  const double* x1 = nullptr;
  const double* y0 = nullptr;
  const double* y1 = nullptr;
  std::size_t n = 0;
};

/// Points to transform; z may be null (treated as 0).
struct PointArrays {
  const double* x = nullptr;
  const double* y = nullptr;
  const double* z = nullptr;
  std::size_t n = 0;
};

enum class Isa { kScalar, kAvx2 };

/// ISA selected at first use: AVX2 when compiled in and supported by the CPU,
/// unless ROADTRACK_FORCE_SCALAR is set to a non-empty value other than "0".
Isa active_isa();
const char* isa_name(Isa isa);
bool isa_available(Isa isa);

/// out[i] = IOU(a, b[i]); 0 when the union is empty.
void iou_one_to_many(const Footprint& a, const FootprintArrays& b, double* out);

/// Row-major 3x4 matrix p. Writes the homogeneous result (nu, nv, w) per point
/// and the divided pixel coordinates u = nu / w, v = nv / w.
void project_points(const double* p, const PointArrays& pts, double* u, double* v, double* w);

// Explicit variants for equivalence testing.
namespace scalar {
void iou_one_to_many(const Footprint& a, const FootprintArrays& b, double* out);
void project_points(const double* p, const PointArrays& pts, double* u, double* v, double* w);
}  // namespace scalar

#if defined(ROADTRACK_HAVE_AVX2)
namespace avx2 {
void iou_one_to_many(const Footprint& a, const FootprintArrays& b, double* out);
void project_points(const double* p, const PointArrays& pts, double* u, double* v, double* w);
}  // namespace avx2
#endif

}  // namespace roadtrack::kernels
