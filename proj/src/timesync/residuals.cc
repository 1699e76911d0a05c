#include "roadtrack/timesync/residuals.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

namespace roadtrack::timesync {

ResidualResult estimate_residuals(const std::map<ObjectId, TrajectorySpline>& splines,
                                  const std::map<FrameKey, std::vector<FrameObservation>>& frame_obs,
                                  const ResidualOptions& options) {
  ResidualResult result;
  for (const auto& [key, items] : frame_obs) {
    struct Term {
      const TrajectorySpline* spline;
      double t, x, w;
    };
    std::vector<Term> terms;
    double lo = -options.bound, hi = options.bound;
    for (const auto& item : items) {
      const auto it = splines.find(item.object);
      if (it == splines.end() || !it->second.covers(item.obs.t)) continue;
      const auto& sp = it->second;
      terms.push_back({&sp, item.obs.t, item.obs.x, item.obs.weight});
      lo = std::max(lo, sp.t_min() - item.obs.t);
      hi = std::min(hi, sp.t_max() - item.obs.t);
    }
    if (terms.empty() || !(hi > lo)) {
      result.residual[key] = 0.0;
      ++result.degenerate_frames;
      spdlog::debug("frame {}:{} has no usable object; residual 0", key.camera, key.frame_index);
      continue;
    }
    auto cost = [&](double eps) {
      double s = 0.0;
      for (const auto& term : terms) {
        const double d = term.w * (term.spline->x(std::clamp(term.t + eps, term.spline->t_min(),
                                                             term.spline->t_max())) -
                                   term.x);
        s += d * d;
      }
      return s;
    };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = cost(c), fd = cost(d);
    while (b - a > options.tolerance) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = cost(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = cost(d);
      }
    }
    double eps = 0.5 * (a + b);
    // Never worse than leaving the frame alone.
    if (lo <= 0.0 && hi >= 0.0 && cost(0.0) <= cost(eps)) eps = 0.0;
    result.residual[key] = std::clamp(eps, -options.bound, options.bound);
  }
  return result;
}

}  // namespace roadtrack::timesync
