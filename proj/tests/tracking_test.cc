#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "roadtrack/core/rng.hpp"
#include "roadtrack/tracking/association.hpp"
#include "roadtrack/tracking/fusion.hpp"
#include "roadtrack/tracking/iou.hpp"
#include "roadtrack/tracking/kalman.hpp"
#include "roadtrack/tracking/stitching.hpp"
#include "roadtrack/tracking/tracker.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace roadtrack::tracking {
namespace {

Box3D box(double x, double y, double l = 10.0, double w = 6.0, Direction d = Direction::kEB) {
  return {x, y, l, w, 5.0, d, VehicleClass::kSedan};
}

Detection det(const Box3D& b, double conf = 0.9, const std::string& cam = "c01", double t = 0.0) {
  return {b, conf, cam, t};
}

bool is_spd(const Eigen::Matrix4d& p) {
  if (!p.isApprox(p.transpose(), 1e-12)) return false;
  Eigen::LLT<Eigen::Matrix4d> llt(p);
  return llt.info() == Eigen::Success;
}

// ---------------------------------------------------------------- Kalman

TEST(Kalman, PredictArithmetic) {
  auto s = make_track(det(box(0, 6)), 1);
  s.mean(2) = 100.0;
  const auto same = kalman_predict(s, 0.0);
  EXPECT_EQ(same.mean, s.mean);
  EXPECT_EQ(same.cov, s.cov);
  const auto next = kalman_predict(s, 1.0 / 15.0);
  EXPECT_NEAR(next.mean(0), 6.667, 5e-4);
  EXPECT_GT(next.cov.trace(), s.cov.trace());
}

TEST(Kalman, UpdateAtPredictionKeepsMean) {
  auto s = make_track(det(box(50, 6)), 1);
  s = kalman_predict(s, 0.1);
  const auto u = kalman_update(s, det(box(s.mean(0), s.mean(1))));
  EXPECT_NEAR(u.mean(0), s.mean(0), 1e-12);
  EXPECT_NEAR(u.mean(1), s.mean(1), 1e-12);
  EXPECT_NEAR(u.innovation.norm(), 0.0, 1e-12);
}

TEST(Kalman, ZeroMeasurementNoiseSnapsToMeasurement) {
  KalmanConfig cfg;
  cfg.r = {0.0, 0.0};
  auto s = make_track(det(box(0, 6)), 1, cfg);
  s = kalman_predict(s, 0.5, cfg);
  const auto u = kalman_update(s, det(box(3.0, 7.5)), cfg);
  EXPECT_NEAR(u.mean(0), 3.0, 1e-9);
  EXPECT_NEAR(u.mean(1), 7.5, 1e-9);
}

TEST(Kalman, RepeatedUpdatesContractMonotonically) {
  auto s = make_track(det(box(0, 6)), 1);
  s.mean(0) = 20.0;
  s.mean(1) = 2.0;
  const Detection z = det(box(5.0, 6.0));
  double prev = INFINITY;
  const double d0 = std::hypot(15.0, 4.0);
  for (int i = 0; i < 20000; ++i) {
    s = kalman_update(s, z);
    const double d = std::hypot(s.mean(0) - 5.0, s.mean(1) - 6.0);
    EXPECT_LE(d, prev + 1e-12);
    prev = d;
  }
  EXPECT_LT(prev, 1e-3 * d0);
}

TEST(Kalman, CovarianceStaysSpdAndShrinksOnUpdate) {
  Rng rng(12);
  auto s = make_track(det(box(0, 6)), 1);
  for (int step = 0; step < 2000; ++step) {
    if (rng.bernoulli(0.5)) {
      s = kalman_predict(s, rng.uniform(0.0, 0.5));
    } else {
      const auto prior = s;
      s = kalman_update(s, det(box(rng.uniform(-50, 50), rng.uniform(0, 40))));
      const Eigen::Matrix2d diff = prior.cov.topLeftCorner<2, 2>() - s.cov.topLeftCorner<2, 2>();
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (diff + diff.transpose()));
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
    }
    ASSERT_TRUE(is_spd(s.cov)) << "step " << step;
  }
}

TEST(Kalman, DirectionMismatchAndDimsAndClass) {
  auto s = make_track(det(box(0, 6, 10, 6)), 1);
  EXPECT_ERROR(kalman_update(s, det(box(0, -6, 10, 6, Direction::kWB))), ErrorKind::kDirectionMismatch);
  auto d = det(box(0, 6, 14, 8));
  d.box.cls = VehicleClass::kPickup;
  s = kalman_update(s, d);
  EXPECT_DOUBLE_EQ(s.l, 12.0);
  EXPECT_DOUBLE_EQ(s.w, 7.0);
  // One vote each: the tie goes to the latest class.
  EXPECT_EQ(s.vehicle_class(), VehicleClass::kPickup);
  s = kalman_update(s, det(box(0, 6)));
  EXPECT_EQ(s.vehicle_class(), VehicleClass::kSedan);
}

// ---------------------------------------------------------------- IOU

TEST(IouBev, Examples) {
  EXPECT_DOUBLE_EQ(iou_bev(box(0, 6), box(0, 6)), 1.0);
  EXPECT_DOUBLE_EQ(iou_bev(box(0, 6), box(100, 6)), 0.0);
  EXPECT_DOUBLE_EQ(iou_bev(box(0, 6), box(5, 6)), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(testing::raster_iou(box(0, 6), box(5, 6)), 1.0 / 3.0);
  // Touching edges share no area.
  EXPECT_DOUBLE_EQ(iou_bev(box(0, 6), box(10, 6)), 0.0);
}

// Raster areas are only known up to one cell per edge, which bounds the
// rasterized IOU in an interval around the exact value.
std::pair<double, double> raster_bounds(const Box3D& a, const Box3D& b) {
  const auto fa = footprint(a), fb = footprint(b);
  const double e = 0.01;
  const double iw = std::max(0.0, std::min(fa.x1, fb.x1) - std::max(fa.x0, fb.x0));
  const double ih = std::max(0.0, std::min(fa.y1, fb.y1) - std::max(fa.y0, fb.y0));
  auto area = [](double w, double h) { return std::max(0.0, w) * std::max(0.0, h); };
  const double amin = area(fa.x1 - fa.x0 - e, fa.y1 - fa.y0 - e), amax = area(fa.x1 - fa.x0 + e, fa.y1 - fa.y0 + e);
  const double bmin = area(fb.x1 - fb.x0 - e, fb.y1 - fb.y0 - e), bmax = area(fb.x1 - fb.x0 + e, fb.y1 - fb.y0 + e);
  const double imin = iw > 0 && ih > 0 ? area(iw - e, ih - e) : 0.0;
  const double imax = iw > 0 && ih > 0 ? area(iw + e, ih + e) : 0.0;
  return {imin / (amax + bmax - imin), std::min(1.0, imax / (amin + bmin - imax))};
}

Box3D random_box(Rng& rng, bool on_grid) {
  const auto d = rng.bernoulli(0.5) ? Direction::kEB : Direction::kWB;
  const double sy = d == Direction::kEB ? 1.0 : -1.0;
  Box3D b = box(rng.uniform(-20, 20), sy * rng.uniform(2, 30), rng.uniform(8, 60), rng.uniform(5, 9), d);
  if (on_grid) {
    // Positions and lengths on 0.01 ft, widths on 0.02 ft so half-widths
    // also land on cell boundaries.
    b.x = std::round(b.x * 100) / 100;
    b.l = std::round(b.l * 100) / 100;
    b.w = std::round(b.w * 50) / 50;
    b.y = std::round(b.y * 100) / 100;
  }
  return b;
}

TEST(IouBev, PropertiesAndRasterOracle) {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const Box3D a = random_box(rng, false);
    Box3D b = random_box(rng, false);
    b.direction = a.direction;
    b.y = std::copysign(b.y, a.y);
    const double v = iou_bev(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_EQ(v, iou_bev(b, a));
    EXPECT_LT(v, 1.0);
    const auto [lo, hi] = raster_bounds(a, b);
    const double r = testing::raster_iou(a, b);
    EXPECT_GE(r, lo - 1e-12);
    EXPECT_LE(r, hi + 1e-12);
    EXPECT_GE(v, lo - 1e-12);
    EXPECT_LE(v, hi + 1e-12);
  }
}

TEST(IouBev, ExactOnCellAlignedBoxes) {
  Rng rng(19);
  for (int i = 0; i < 1000; ++i) {
    const Box3D a = random_box(rng, true);
    Box3D b = random_box(rng, true);
    b.direction = a.direction;
    b.y = std::copysign(b.y, a.y);
    EXPECT_NEAR(iou_bev(a, b), testing::raster_iou(a, b), 1e-9);
  }
}

TEST(IouBev, MatrixMatchesPairwise) {
  Rng rng(14);
  std::vector<Box3D> a, b;
  for (int i = 0; i < 7; ++i) a.push_back(box(rng.uniform(0, 40), rng.uniform(2, 20)));
  for (int i = 0; i < 9; ++i) b.push_back(box(rng.uniform(0, 40), rng.uniform(2, 20)));
  const auto m = iou_matrix(a, b);
  ASSERT_EQ(m.rows(), 7);
  ASSERT_EQ(m.cols(), 9);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 9; ++j) EXPECT_DOUBLE_EQ(m(i, j), iou_bev(a[i], b[j]));
}

// ---------------------------------------------------------------- association

double brute_best_total(const Eigen::MatrixXd& iou, double min_iou) {
  // Every partial injective map rows -> columns (or unmatched), recursively.
  const int rows = static_cast<int>(iou.rows()), cols = static_cast<int>(iou.cols());
  std::vector<bool> used(cols, false);
  double best = 0.0;
  std::function<void(int, double)> go = [&](int r, double total) {
    if (r == rows) {
      best = std::max(best, total);
      return;
    }
    go(r + 1, total);
    for (int c = 0; c < cols; ++c) {
      if (used[c] || iou(r, c) < min_iou) continue;
      used[c] = true;
      go(r + 1, total + iou(r, c));
      used[c] = false;
    }
  };
  go(0, 0.0);
  return best;
}

TEST(AssociateKiou, Examples) {
  const std::vector<Box3D> t1{box(0, 6)};
  auto a = associate_kiou(t1, std::vector<Box3D>{box(0.5, 6)}, 0.3);
  ASSERT_EQ(a.matches.size(), 1u);
  a = associate_kiou(t1, std::vector<Box3D>{box(8.5, 6)}, 0.3);
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_tracks, std::vector<int>{0});
  EXPECT_EQ(a.unmatched_detections, std::vector<int>{0});
}

TEST(AssociateKiou, CrossingPairMatchesPermutationOracle) {
  // Track 0 overlaps both detections; track 1 only detection 0.
  const std::vector<Box3D> tracks{box(0, 6), box(-4, 6)};
  const std::vector<Box3D> dets{box(-2, 6), box(3, 6)};
  const auto a = associate_kiou(tracks, dets, 0.3);
  const auto m = iou_matrix(tracks, dets);
  const double keep = m(0, 0) + m(1, 1), swap = m(0, 1) + m(1, 0);
  ASSERT_EQ(a.matches.size(), 2u);
  double total = 0.0;
  for (auto [t, d] : a.matches) total += m(t, d);
  EXPECT_DOUBLE_EQ(total, std::max(keep, swap));
  EXPECT_EQ(a.matches, (std::vector<std::pair<int, int>>{{0, 1}, {1, 0}}));
}

TEST(AssociateKiou, OptimalOnRandomInstances) {
  Rng rng(15);
  for (int trial = 0; trial < 400; ++trial) {
    const int nt = rng.uniform_int(0, 6), nd = rng.uniform_int(0, 6);
    std::vector<Box3D> tracks, dets;
    for (int i = 0; i < nt; ++i) tracks.push_back(box(rng.uniform(0, 30), rng.uniform(2, 10)));
    for (int i = 0; i < nd; ++i) dets.push_back(box(rng.uniform(0, 30), rng.uniform(2, 10)));
    const auto a = associate_kiou(tracks, dets, 0.3);
    const auto m = iou_matrix(tracks, dets);
    double total = 0.0;
    std::set<int> ts, ds;
    for (auto [t, d] : a.matches) {
      EXPECT_GE(m(t, d), 0.3);
      total += m(t, d);
      ts.insert(t), ds.insert(d);
    }
    EXPECT_EQ(ts.size(), a.matches.size());
    EXPECT_EQ(ds.size(), a.matches.size());
    EXPECT_EQ(a.matches.size() + a.unmatched_tracks.size(), static_cast<std::size_t>(nt));
    EXPECT_EQ(a.matches.size() + a.unmatched_detections.size(), static_cast<std::size_t>(nd));
    EXPECT_NEAR(total, brute_best_total(m, 0.3), 1e-12);
  }
}

TEST(AssociateByte, AllHighConfidenceEqualsKiou) {
  Rng rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Box3D> tracks, boxes;
    std::vector<Detection> dets;
    for (int i = 0; i < 4; ++i) tracks.push_back(box(rng.uniform(0, 30), rng.uniform(2, 10)));
    for (int i = 0; i < 5; ++i) {
      boxes.push_back(box(rng.uniform(0, 30), rng.uniform(2, 10)));
      dets.push_back(det(boxes.back(), 0.9));
    }
    const auto b = associate_byte(tracks, dets);
    const auto k = associate_kiou(tracks, boxes, 0.3);
    EXPECT_EQ(b.matches, k.matches);
    EXPECT_EQ(b.unmatched_tracks, k.unmatched_tracks);
    EXPECT_EQ(b.spawn, k.unmatched_detections);
    EXPECT_TRUE(b.discarded.empty());
  }
}

TEST(AssociateByte, LowBandKeepsTrackWithoutSpawning) {
  const std::vector<Box3D> tracks{box(0, 6)};
  const std::vector<Detection> dets{det(box(0.5, 6), 0.15), det(box(200, 6), 0.15), det(box(0, 30), 0.005)};
  const auto b = associate_byte(tracks, dets);
  EXPECT_EQ(b.matches, (std::vector<std::pair<int, int>>{{0, 0}}));
  EXPECT_TRUE(b.spawn.empty());
  EXPECT_TRUE(b.unmatched_tracks.empty());
  EXPECT_EQ(b.discarded, (std::vector<int>{1, 2}));
}

TEST(AssociateByte, HighStageTakesPriority) {
  const std::vector<Box3D> tracks{box(0, 6)};
  const std::vector<Detection> dets{det(box(0, 6), 0.2), det(box(2, 6), 0.8)};
  const auto b = associate_byte(tracks, dets);
  EXPECT_EQ(b.matches, (std::vector<std::pair<int, int>>{{0, 1}}));
  EXPECT_EQ(b.discarded, (std::vector<int>{0}));
}

// ---------------------------------------------------------------- fusion

TEST(Fusion, Examples) {
  std::vector<Detection> same{det(box(0, 6), 0.7, "c01"), det(box(1, 6), 0.8, "c02")};
  auto out = fuse_detections(same);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].camera, "c02");
  std::vector<Detection> apart{det(box(0, 6), 0.7), det(box(200, 6), 0.8)};
  EXPECT_EQ(fuse_detections(apart).size(), 2u);
  std::vector<Detection> chain{det(box(0, 6), 0.9), det(box(8, 6), 0.8), det(box(16, 6), 0.7)};
  out = fuse_detections(chain);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].box.x, 0.0);
  EXPECT_EQ(out[1].box.x, 16.0);
}

TEST(Fusion, OutputIsAntichain) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Detection> dets;
    const int n = rng.uniform_int(0, 12);
    for (int i = 0; i < n; ++i) dets.push_back(det(box(rng.uniform(0, 80), rng.uniform(2, 20)), rng.uniform()));
    const auto out = fuse_detections(dets);
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j) EXPECT_LE(iou_bev(out[i].box, out[j].box), 0.01);
    // Anything dropped overlaps something kept with at least its confidence.
    for (const auto& d : dets) {
      const bool kept = std::any_of(out.begin(), out.end(), [&](const Detection& o) { return o.box == d.box; });
      if (kept) continue;
      EXPECT_TRUE(std::any_of(out.begin(), out.end(), [&](const Detection& o) {
        return iou_bev(o.box, d.box) > 0.01 && o.confidence >= d.confidence;
      }));
    }
  }
}

// ---------------------------------------------------------------- stitching

Tracklet fragment(std::int64_t id, double x0, double v, double y, double t0, double t1, const std::string& cam = "c01",
                  double l = 15.0) {
  Tracklet tr{id, cam, {}};
  for (int k = 0;; ++k) {
    const double t = t0 + k / 15.0;
    if (t > t1 + 1e-9) break;
    tr.samples.push_back({t, box(x0 + v * t, y, l, 6.0)});
  }
  return tr;
}

std::multiset<std::pair<double, double>> sample_set(const std::vector<Tracklet>& ts) {
  std::multiset<std::pair<double, double>> s;
  for (const auto& t : ts)
    for (const auto& smp : t.samples) s.insert({smp.t, smp.box.x});
  return s;
}

std::multiset<std::pair<double, double>> sample_set(const std::vector<Trajectory>& ts) {
  std::multiset<std::pair<double, double>> s;
  for (const auto& t : ts)
    for (const auto& smp : t.samples) s.insert({smp.t, smp.box.x});
  return s;
}

TEST(Stitching, GapFragmentsJoin) {
  const std::vector<Tracklet> in{fragment(1, 0, 80, 6, 0, 3), fragment(2, 0, 80, 6, 4, 7)};
  const auto out = stitch_tracklets(in);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].members, (std::vector<std::int64_t>{1, 2}));
  EXPECT_TRUE(out[0].spline.has_value());
  EXPECT_EQ(sample_set(out), sample_set(in));
}

TEST(Stitching, AdjacentLanesStaySeparate) {
  const std::vector<Tracklet> in{fragment(1, 0, 80, 6, 0, 3), fragment(2, 0, 80, 18, 3.5, 7)};
  EXPECT_EQ(stitch_tracklets(in).size(), 2u);
  const std::vector<Tracklet> par{fragment(1, 0, 80, 6, 0, 7), fragment(2, 0, 80, 18, 0, 7)};
  EXPECT_EQ(stitch_tracklets(par).size(), 2u);
}

TEST(Stitching, SingleTrackletPassesThrough) {
  const std::vector<Tracklet> in{fragment(5, 10, 60, 6, 0, 2)};
  const auto out = stitch_tracklets(in);
  ASSERT_EQ(out.size(), 1u);
  ASSERT_EQ(out[0].smoothed.size(), in[0].samples.size());
  for (std::size_t i = 0; i < in[0].samples.size(); ++i) {
    EXPECT_EQ(out[0].smoothed[i].t, in[0].samples[i].t);
    EXPECT_EQ(out[0].smoothed[i].box, in[0].samples[i].box);
  }
}

TEST(Stitching, InconsistentOverlapNeverMerged) {
  // Long overlap, same lane, boxes 40 ft apart: IOU 0 at every shared time.
  const std::vector<Tracklet> in{fragment(1, 0, 80, 6, 0, 4), fragment(2, 40, 80, 6, 2, 6)};
  EXPECT_FALSE(stitch_cost(in[0], in[1], {}).has_value());
  EXPECT_EQ(stitch_tracklets(in).size(), 2u);
}

TEST(Stitching, CrossCameraOverlapMerges) {
  const std::vector<Tracklet> in{fragment(1, 0, 80, 6, 0, 4, "c01"), fragment(2, 0.5, 80, 6, 3, 7, "c02")};
  const auto out = stitch_tracklets(in);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].cameras, (std::vector<std::string>{"c01", "c02"}));
}

TEST(Stitching, ContainedTrackletJoinsChain) {
  // A vehicle seen by c01 across the whole window and by c02 for a piece in
  // the middle, then by c03 afterwards.
  const std::vector<Tracklet> in{fragment(1, 0, 80, 6, 0, 6, "c01"), fragment(2, 0.2, 80, 6, 2, 4, "c02"),
                                 fragment(3, 0.1, 80, 6, 5.5, 9, "c03")};
  const auto out = stitch_tracklets(in);
  EXPECT_LE(out.size(), 2u);
  EXPECT_EQ(sample_set(out), sample_set(in));
  const auto it = std::find_if(out.begin(), out.end(), [](const Trajectory& t) {
    return std::find(t.members.begin(), t.members.end(), 3) != t.members.end();
  });
  ASSERT_NE(it, out.end());
  EXPECT_GE(it->members.size(), 2u);
}

TEST(Stitching, SingleSampleTrackletUsesSuccessorVelocity) {
  // A one-sample fragment followed 1 s later by its continuation, with a
  // different vehicle 30 ft back in the same lane following the same path.
  std::vector<Tracklet> in{fragment(1, 0, 80, 6, 2, 2), fragment(2, 0, 80, 6, 3, 6), fragment(3, -110, 80, 6, 3.2, 6)};
  const auto out = stitch_tracklets(in);
  const auto it = std::find_if(out.begin(), out.end(), [](const Trajectory& t) {
    return std::find(t.members.begin(), t.members.end(), 1) != t.members.end();
  });
  ASSERT_NE(it, out.end());
  EXPECT_EQ(it->members, (std::vector<std::int64_t>{1, 2}));
}

TEST(Stitching, DirectionsNeverMix) {
  Tracklet wb = fragment(2, 300, -80, -6, 4, 7);
  for (auto& s : wb.samples) s.box.direction = Direction::kWB;
  const std::vector<Tracklet> in{fragment(1, 0, 80, 6, 0, 3), wb};
  EXPECT_EQ(stitch_tracklets(in).size(), 2u);
}

TEST(Stitching, SampleMultisetPreservedOnRandomInputs) {
  Rng rng(18);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Tracklet> in;
    for (int v = 0; v < 5; ++v) {
      const double x0 = rng.uniform(-200, 0), speed = rng.uniform(50, 90), y = 6 + 12 * rng.uniform_int(0, 2);
      double t = rng.uniform(0, 2);
      while (t < 12) {
        const double len = rng.uniform(0.2, 3.0);
        in.push_back(fragment(static_cast<std::int64_t>(in.size() + 1), x0, speed, y, t, t + len,
                              "c0" + std::to_string(rng.uniform_int(1, 3))));
        t += len + rng.uniform(-0.3, 1.5);
      }
    }
    const auto out = stitch_tracklets(in);
    EXPECT_EQ(sample_set(out), sample_set(in));
    std::multiset<std::int64_t> members;
    for (const auto& t : out) members.insert(t.members.begin(), t.members.end());
    EXPECT_EQ(members.size(), in.size());
    EXPECT_EQ(std::set<std::int64_t>(members.begin(), members.end()).size(), in.size());
  }
}

// ---------------------------------------------------------------- track_scene

struct Vehicle {
  double x0, v, y;
  Direction d;
};

// Cameras at 30 Hz with their own phase, each seeing x in its window.
std::vector<DetectionFrame> render(const std::vector<Vehicle>& vs, const std::vector<std::pair<double, double>>& views,
                                   double duration, const std::vector<double>& phase) {
  std::vector<DetectionFrame> frames;
  for (std::size_t c = 0; c < views.size(); ++c) {
    const std::string cam = "c0" + std::to_string(c + 1);
    for (int k = 0;; ++k) {
      const double t = phase[c] + k / 30.0;
      if (t > duration) break;
      DetectionFrame f{cam, k, t, {}};
      for (const auto& v : vs) {
        const double x = v.x0 + v.v * t;
        if (x < views[c].first || x > views[c].second) continue;
        f.detections.push_back(det(box(x, v.y, 15.0, 6.0, v.d), 0.95, cam, t));
      }
      frames.push_back(std::move(f));
    }
  }
  return frames;
}

std::vector<Vehicle> ten_vehicles() {
  std::vector<Vehicle> vs;
  for (int i = 0; i < 6; ++i) vs.push_back({-40.0 * i - 10.0 * (i % 3), 90.0, 6.0 + 12.0 * (i % 3), Direction::kEB});
  for (int i = 0; i < 4; ++i) vs.push_back({900.0 + 50.0 * i, -65.0, -6.0 - 12.0 * (i % 2), Direction::kWB});
  return vs;
}

// Trajectory -> vehicle by nearest position at its first sample; every
// sample must stay on that vehicle.
int owner(const Trajectory& tr, const std::vector<Vehicle>& vs) {
  const auto& s0 = tr.smoothed.front();
  int best = -1;
  double bd = INFINITY;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double d = std::hypot(vs[i].x0 + vs[i].v * s0.t - s0.box.x, vs[i].y - s0.box.y);
    if (d < bd) bd = d, best = static_cast<int>(i);
  }
  for (const auto& s : tr.smoothed) {
    const auto& v = vs[best];
    if (std::abs(v.x0 + v.v * s.t - s.box.x) > 3.0 || std::abs(v.y - s.box.y) > 1.0) return -1;
  }
  return best;
}

TEST(TrackScene, PerfectDetectionsGiveOneTrajectoryPerVehicle) {
  const auto vs = ten_vehicles();
  const auto frames = render(vs, {{-100, 500}, {400, 1000}}, 14.0, {0.0, 0.013});
  for (auto kind : {TrackerKind::kKiou, TrackerKind::kByte}) {
    for (auto fusion : {Fusion::kDf, Fusion::kTf, Fusion::kDfTf}) {
      TrackerConfig cfg;
      cfg.tracker = kind;
      cfg.fusion = fusion;
      const auto out = track_scene(frames, cfg);
      EXPECT_EQ(out.trajectories.size(), vs.size()) << to_string(kind) << "+" << to_string(fusion);
      std::set<int> owners;
      for (const auto& t : out.trajectories) owners.insert(owner(t, vs));
      EXPECT_EQ(owners.size(), vs.size());
      EXPECT_EQ(owners.count(-1), 0u);
    }
  }
}

TEST(TrackScene, NoFusionGivesOneTrackletPerCameraView) {
  const auto vs = ten_vehicles();
  const auto frames = render(vs, {{-100, 500}, {400, 1000}}, 14.0, {0.0, 0.013});
  const auto out = track_scene(frames, TrackerConfig{});
  std::map<std::string, int> per_camera;
  for (const auto& t : out.trajectories) {
    ASSERT_EQ(t.cameras.size(), 1u);
    ++per_camera[t.cameras[0]];
    EXPECT_GE(owner(t, vs), 0);
  }
  EXPECT_EQ(per_camera["c01"], 10);
  EXPECT_EQ(per_camera["c02"], 10);
}

TEST(TrackScene, SilentCameraStillTracksOthers) {
  const auto vs = ten_vehicles();
  auto frames = render(vs, {{-100, 500}, {400, 1000}}, 14.0, {0.0, 0.013});
  for (auto& f : frames)
    if (f.camera == "c02") f.detections.clear();
  TrackerConfig cfg;
  cfg.fusion = Fusion::kDfTf;
  const auto out = track_scene(frames, cfg);
  EXPECT_EQ(out.trajectories.size(), vs.size());
}

TEST(TrackScene, PhaseJitterDoesNotChangeCount) {
  const auto vs = ten_vehicles();
  TrackerConfig cfg;
  cfg.fusion = Fusion::kDfTf;
  const auto aligned = track_scene(render(vs, {{-100, 500}, {400, 1000}}, 14.0, {0.0, 0.0}), cfg);
  const auto jittered = track_scene(render(vs, {{-100, 500}, {400, 1000}}, 14.0, {1.0 / 120, -1.0 / 120 + 1.0 / 30}), cfg);
  EXPECT_EQ(aligned.trajectories.size(), jittered.trajectories.size());
}

TEST(TrackScene, EmptySceneThrows) {
  EXPECT_ERROR(track_scene({}, TrackerConfig{}), ErrorKind::kEmptyScene);
}

TEST(TrackScene, ByteKeepsTrackAliveOnLowConfidence) {
  // One vehicle; after 1 s its detections drop to confidence 0.15.
  std::vector<DetectionFrame> frames;
  for (int k = 0; k < 90; ++k) {
    const double t = k / 30.0;
    DetectionFrame f{"c01", k, t, {}};
    f.detections.push_back(det(box(70 * t, 6, 15, 6), k < 30 ? 0.9 : 0.15, "c01", t));
    frames.push_back(f);
  }
  TrackerConfig byte;
  byte.tracker = TrackerKind::kByte;
  const auto b = track_scene(frames, byte);
  ASSERT_EQ(b.trajectories.size(), 1u);
  EXPECT_GT(b.trajectories[0].smoothed.back().t, 2.8);

  // KIOU fed the same stream after filtering at the high threshold.
  for (auto& f : frames)
    std::erase_if(f.detections, [](const Detection& d) { return d.confidence < 0.3; });
  const auto k = track_scene(frames, TrackerConfig{});
  ASSERT_EQ(k.trajectories.size(), 1u);
  EXPECT_LT(k.trajectories[0].smoothed.back().t, 1.1);
}

TEST(TrackerConfig, KeyValueAndValidation) {
  const auto kv = KeyValueConfig::parse("tracker = byte\nfusion = df+tf\nn_init = 1\nkalman.q = 1,2,3,4\nstitch.t_gap_max = 5\n");
  const auto cfg = TrackerConfig::from_keyvalue(kv);
  EXPECT_EQ(cfg.tracker, TrackerKind::kByte);
  EXPECT_EQ(cfg.fusion, Fusion::kDfTf);
  EXPECT_EQ(cfg.n_init, 1);
  EXPECT_EQ(cfg.kalman.q[3], 4.0);
  EXPECT_EQ(cfg.stitch.t_gap_max, 5.0);
  EXPECT_ERROR(TrackerConfig::from_keyvalue(KeyValueConfig::parse("bogus = 1\n")), ErrorKind::kValidationError);
  EXPECT_ERROR(parse_fusion("both"), ErrorKind::kValidationError);
  TrackerConfig bad;
  bad.byte_low = 0.5;
  EXPECT_ERROR(bad.validate(), ErrorKind::kValidationError);
}

TEST(TrajectoriesFromTracklets, TfJoinsCameraPieces) {
  std::vector<Tracklet> pieces{fragment(1, 0, 80, 6, 0, 4, "c01"), fragment(2, 0, 80, 6, 3.5, 8, "c02"),
                               fragment(3, 0, 80, 30, 0, 8, "c01")};
  TrackerConfig cfg;
  EXPECT_EQ(trajectories_from_tracklets(pieces, cfg).size(), 3u);
  cfg.fusion = Fusion::kTf;
  EXPECT_EQ(trajectories_from_tracklets(pieces, cfg).size(), 2u);
}

}  // namespace
}  // namespace roadtrack::tracking
