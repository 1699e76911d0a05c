#include "roadtrack/tracking/iou.hpp"

#include <vector>

#include "roadtrack/kernels/kernels.hpp"

namespace roadtrack::tracking {

double iou_bev(const Box3D& a, const Box3D& b) {
  const Footprint fa = footprint(a);
  const Footprint fb = footprint(b);
  double out = 0.0;
  kernels::iou_one_to_many(fa, {&fb.x0, &fb.x1, &fb.y0, &fb.y1, 1}, &out);
  return out;
}

Eigen::MatrixXd iou_matrix(std::span<const Box3D> a, std::span<const Box3D> b) {
  Eigen::MatrixXd m(a.size(), b.size());
  if (a.empty() || b.empty()) return m;
  std::vector<double> x0(b.size()), x1(b.size()), y0(b.size()), y1(b.size()), row(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    const Footprint f = footprint(b[j]);
    x0[j] = f.x0;
    x1[j] = f.x1;
    y0[j] = f.y0;
    y1[j] = f.y1;
  }
  const kernels::FootprintArrays arr{x0.data(), x1.data(), y0.data(), y1.data(), b.size()};
  for (std::size_t i = 0; i < a.size(); ++i) {
    kernels::iou_one_to_many(footprint(a[i]), arr, row.data());
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = row[j];
  }
  return m;
}

}  // namespace roadtrack::tracking
