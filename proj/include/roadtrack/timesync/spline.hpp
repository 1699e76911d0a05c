#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace roadtrack::timesync {

struct WeightedObservation {
  double t = 0.0;       // seconds
  double x = 0.0;       // feet
  double y = 0.0;       // feet
  double weight = 1.0;  // pixels per foot
  std::string camera;
  std::int64_t frame_index = 0;
};

struct SplineOptions {
  /// Upper bound on interior knots; negative means only the 2-per-second cap.
  int knot_budget = -1;
};

/// Clamped cubic B-spline pair (x(t), y(t)) with uniform interior knots.
class TrajectorySpline {
 public:
  TrajectorySpline() = default;

  double t_min() const { return t0_; }
  double t_max() const { return t0_ + span_; }
  int knot_count() const { return knot_count_; }
  /// Breakpoints in seconds, including both domain ends.
  std::vector<double> knots() const;

  bool covers(double t) const;
  /// Throws OutOfDomain outside [t_min, t_max] (with a 1e-6 s allowance).
  std::pair<double, double> eval(double t) const;
  double x(double t) const { return eval(t).first; }
  double y(double t) const { return eval(t).second; }
  /// (dx/dt, dy/dt).
  std::pair<double, double> velocity(double t) const;

  double weighted_residual_x() const { return wrss_x_; }
  double weighted_residual_y() const { return wrss_y_; }

 private:
  friend TrajectorySpline fit_spline(std::span<const WeightedObservation>, const SplineOptions&);

  double to_local(double t) const;

  double t0_ = 0.0;
  double span_ = 1.0;
  int knot_count_ = 0;
  Eigen::Array<double, 1, Eigen::Dynamic> knot_vector_;
  Eigen::VectorXd cx_;
  Eigen::VectorXd cy_;
  double wrss_x_ = 0.0;
  double wrss_y_ = 0.0;
};

/// Weighted least-squares cubic spline with knot count
/// min(floor(2 * duration), budget, largest count with a full-rank fit).
/// Throws TooFewObservations (< 4) or ZeroDuration.
TrajectorySpline fit_spline(std::span<const WeightedObservation> obs,
                            const SplineOptions& options = {});

}  // namespace roadtrack::timesync
