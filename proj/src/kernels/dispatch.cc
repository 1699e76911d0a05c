// Compiled without ISA flags so the CPU check itself runs anywhere.
#include <cstdlib>
#include <string_view>

#include "roadtrack/kernels/kernels.hpp"

namespace roadtrack::kernels {

namespace {

Isa detect() {
  const char* force = std::getenv("ROADTRACK_FORCE_SCALAR");
  if (force && *force && std::string_view(force) != "0") return Isa::kScalar;
  return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

}  // namespace

bool isa_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
#if defined(ROADTRACK_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

void iou_one_to_many(const Footprint& a, const FootprintArrays& b, double* out) {
#if defined(ROADTRACK_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2) return avx2::iou_one_to_many(a, b, out);
#endif
  scalar::iou_one_to_many(a, b, out);
}

void project_points(const double* p, const PointArrays& pts, double* u, double* v, double* w) {
#if defined(ROADTRACK_HAVE_AVX2)
  if (active_isa() == Isa::kAvx2) return avx2::project_points(p, pts, u, v, w);
#endif
  scalar::project_points(p, pts, u, v, w);
}

}  // namespace roadtrack::kernels
