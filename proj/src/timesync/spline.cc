#include "roadtrack/timesync/spline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>
#include <unsupported/Eigen/Splines>

#include "roadtrack/core/error.hpp"

namespace roadtrack::timesync {

namespace {

using Basis = Eigen::Spline<double, 1, 3>;
constexpr int kDegree = 3;
constexpr double kDomainSlack = 1e-6;

Eigen::Array<double, 1, Eigen::Dynamic> clamped_knots(int interior) {
  Eigen::Array<double, 1, Eigen::Dynamic> k(interior + 2 * (kDegree + 1));
  for (int i = 0; i <= kDegree; ++i) {
    k[i] = 0.0;
    k[k.size() - 1 - i] = 1.0;
  }
  for (int j = 1; j <= interior; ++j) {
    k[kDegree + j] = static_cast<double>(j) / static_cast<double>(interior + 1);
  }
  return k;
}

}  // namespace

double TrajectorySpline::to_local(double t) const {
  if (!covers(t)) {
    fail(ErrorKind::kOutOfDomain, "t outside spline domain");
  }
  return std::clamp((t - t0_) / span_, 0.0, 1.0);
}

bool TrajectorySpline::covers(double t) const {
  return t >= t0_ - kDomainSlack && t <= t0_ + span_ + kDomainSlack;
}

std::vector<double> TrajectorySpline::knots() const {
  std::vector<double> out;
  out.reserve(knot_count_ + 2);
  for (int j = 0; j <= knot_count_ + 1; ++j) {
    out.push_back(t0_ + span_ * static_cast<double>(j) / static_cast<double>(knot_count_ + 1));
  }
  return out;
}

std::pair<double, double> TrajectorySpline::eval(double t) const {
  const double s = to_local(t);
  const auto span = Basis::Span(s, kDegree, knot_vector_);
  const auto b = Basis::BasisFunctions(s, kDegree, knot_vector_);
  double x = 0.0, y = 0.0;
  for (int i = 0; i <= kDegree; ++i) {
    x += b[i] * cx_[span - kDegree + i];
    y += b[i] * cy_[span - kDegree + i];
  }
  return {x, y};
}

std::pair<double, double> TrajectorySpline::velocity(double t) const {
  const double s = to_local(t);
  const auto span = Basis::Span(s, kDegree, knot_vector_);
  const auto d = Basis::BasisFunctionDerivatives(s, 1, kDegree, knot_vector_);
  double vx = 0.0, vy = 0.0;
  for (int i = 0; i <= kDegree; ++i) {
    vx += d(1, i) * cx_[span - kDegree + i];
    vy += d(1, i) * cy_[span - kDegree + i];
  }
  return {vx / span_, vy / span_};
}

TrajectorySpline fit_spline(std::span<const WeightedObservation> obs, const SplineOptions& options) {
  if (obs.size() < 4) {
    fail(ErrorKind::kTooFewObservations,
         "spline needs >= 4 observations, got " + std::to_string(obs.size()));
  }
  double t_lo = obs[0].t, t_hi = obs[0].t;
  std::set<double> distinct;
  for (const auto& o : obs) {
    t_lo = std::min(t_lo, o.t);
    t_hi = std::max(t_hi, o.t);
    distinct.insert(o.t);
  }
  const double duration = t_hi - t_lo;
  if (!(duration > 0.0)) fail(ErrorKind::kZeroDuration, "observations share one timestamp");

  int k = static_cast<int>(std::floor(2.0 * duration));
  if (options.knot_budget >= 0) k = std::min(k, options.knot_budget);
  k = std::min(k, static_cast<int>(distinct.size()) - (kDegree + 1));
  k = std::max(k, 0);

  TrajectorySpline sp;
  sp.t0_ = t_lo;
  sp.span_ = duration;

  // Banded normal equations; the rank test drops knots until every basis
  // function is supported by data.
  for (;; --k) {
    const auto knots = clamped_knots(k);
    const int m = k + kDegree + 1;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(m, 2);
    for (const auto& o : obs) {
      const double s = std::clamp((o.t - t_lo) / duration, 0.0, 1.0);
      const auto span = Basis::Span(s, kDegree, knots);
      const auto b = Basis::BasisFunctions(s, kDegree, knots);
      const double w2 = o.weight * o.weight;
      const auto first = span - kDegree;
      for (int i = 0; i <= kDegree; ++i) {
        for (int j = 0; j <= kDegree; ++j) g(first + i, first + j) += w2 * b[i] * b[j];
        r(first + i, 0) += w2 * b[i] * o.x;
        r(first + i, 1) += w2 * b[i] * o.y;
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g);
    qr.setThreshold(1e-12);
    if (qr.rank() < m && k > 0) continue;
    const Eigen::MatrixXd c = qr.solve(r);
    sp.knot_count_ = k;
    sp.knot_vector_ = knots;
    sp.cx_ = c.col(0);
    sp.cy_ = c.col(1);
    break;
  }

  for (const auto& o : obs) {
    const auto [fx, fy] = sp.eval(o.t);
    sp.wrss_x_ += std::pow(o.weight * (fx - o.x), 2);
    sp.wrss_y_ += std::pow(o.weight * (fy - o.y), 2);
  }
  return sp;
}

}  // namespace roadtrack::timesync
