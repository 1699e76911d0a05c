#include <algorithm>

#include "roadtrack/kernels/kernels.hpp"

namespace roadtrack::kernels::scalar {

// The AVX2 file evaluates the same expressions in the same order; keep them in sync.
void iou_one_to_many(const Footprint& a, const FootprintArrays& b, double* out) {
  const double area_a = (a.x1 - a.x0) * (a.y1 - a.y0);
  for (std::size_t i = 0; i < b.n; ++i) {
    const double ix = std::max(0.0, std::min(a.x1, b.x1[i]) - std::max(a.x0, b.x0[i]));
    const double iy = std::max(0.0, std::min(a.y1, b.y1[i]) - std::max(a.y0, b.y0[i]));
    const double inter = ix * iy;
    const double area_b = (b.x1[i] - b.x0[i]) * (b.y1[i] - b.y0[i]);
    const double uni = (area_a + area_b) - inter;
    out[i] = uni > 0.0 ? inter / uni : 0.0;
  }
}

void project_points(const double* p, const PointArrays& pts, double* u, double* v, double* w) {
  for (std::size_t i = 0; i < pts.n; ++i) {
    const double x = pts.x[i];
    const double y = pts.y[i];
    const double z = pts.z ? pts.z[i] : 0.0;
    const double nu = ((p[0] * x + p[1] * y) + p[2] * z) + p[3];
    const double nv = ((p[4] * x + p[5] * y) + p[6] * z) + p[7];
    const double nw = ((p[8] * x + p[9] * y) + p[10] * z) + p[11];
    w[i] = nw;
    u[i] = nu / nw;
    v[i] = nv / nw;
  }
}

}  // namespace roadtrack::kernels::scalar
