// Built with -mavx2 only; callers reach it through the dispatcher after a CPU check.
#include <immintrin.h>

#include <algorithm>

#include "roadtrack/kernels/kernels.hpp"

namespace roadtrack::kernels::avx2 {

void iou_one_to_many(const Footprint& a, const FootprintArrays& b, double* out) {
  const double area_a_s = (a.x1 - a.x0) * (a.y1 - a.y0);
  const __m256d ax0 = _mm256_set1_pd(a.x0);
  const __m256d ax1 = _mm256_set1_pd(a.x1);
  const __m256d ay0 = _mm256_set1_pd(a.y0);
  const __m256d ay1 = _mm256_set1_pd(a.y1);
  const __m256d area_a = _mm256_set1_pd(area_a_s);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= b.n; i += 4) {
    const __m256d bx0 = _mm256_loadu_pd(b.x0 + i);
    const __m256d bx1 = _mm256_loadu_pd(b.x1 + i);
    const __m256d by0 = _mm256_loadu_pd(b.y0 + i);
    const __m256d by1 = _mm256_loadu_pd(b.y1 + i);
    // Operand order mirrors std::min / std::max so signed zeros match the
    // scalar path: std::min(a, b) == minpd(b, a), std::max(a, b) == maxpd(b, a).
    const __m256d ix =
        _mm256_max_pd(_mm256_sub_pd(_mm256_min_pd(bx1, ax1), _mm256_max_pd(bx0, ax0)), zero);
    const __m256d iy =
        _mm256_max_pd(_mm256_sub_pd(_mm256_min_pd(by1, ay1), _mm256_max_pd(by0, ay0)), zero);
    const __m256d inter = _mm256_mul_pd(ix, iy);
    const __m256d area_b = _mm256_mul_pd(_mm256_sub_pd(bx1, bx0), _mm256_sub_pd(by1, by0));
    const __m256d uni = _mm256_sub_pd(_mm256_add_pd(area_a, area_b), inter);
    const __m256d ratio = _mm256_div_pd(inter, uni);
    const __m256d positive = _mm256_cmp_pd(uni, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(positive, ratio));
  }
  for (; i < b.n; ++i) {
    const double ix = std::max(0.0, std::min(a.x1, b.x1[i]) - std::max(a.x0, b.x0[i]));
    const double iy = std::max(0.0, std::min(a.y1, b.y1[i]) - std::max(a.y0, b.y0[i]));
    const double inter = ix * iy;
    const double area_b = (b.x1[i] - b.x0[i]) * (b.y1[i] - b.y0[i]);
    const double uni = (area_a_s + area_b) - inter;
    out[i] = uni > 0.0 ? inter / uni : 0.0;
  }
}

void project_points(const double* p, const PointArrays& pts, double* u, double* v, double* w) {
  __m256d m[12];
  for (int k = 0; k < 12; ++k) m[k] = _mm256_set1_pd(p[k]);
  std::size_t i = 0;
  for (; i + 4 <= pts.n; i += 4) {
    const __m256d x = _mm256_loadu_pd(pts.x + i);
    const __m256d y = _mm256_loadu_pd(pts.y + i);
    const __m256d z = pts.z ? _mm256_loadu_pd(pts.z + i) : _mm256_setzero_pd();
    auto row = [&](int r) {
      return _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(m[r], x), _mm256_mul_pd(m[r + 1], y)),
                        _mm256_mul_pd(m[r + 2], z)),
          m[r + 3]);
    };
    const __m256d nu = row(0);
    const __m256d nv = row(4);
    const __m256d nw = row(8);
    _mm256_storeu_pd(w + i, nw);
    _mm256_storeu_pd(u + i, _mm256_div_pd(nu, nw));
    _mm256_storeu_pd(v + i, _mm256_div_pd(nv, nw));
  }
  for (; i < pts.n; ++i) {
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

}  // namespace roadtrack::kernels::avx2
