#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "roadtrack/geometry/calibration.hpp"
#include "roadtrack/geometry/curve.hpp"
#include "roadtrack/geometry/homography.hpp"
#include "roadtrack/geometry/projection.hpp"
#include "support.hpp"

namespace roadtrack {
namespace {

using geometry::Correspondence;
using geometry::Homography;

TEST(Homography, UnitSquareGivesIdentity) {
  std::vector<Correspondence> c;
  for (auto [u, v] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}) {
    c.push_back({{u, v}, {u, v, 0.0}});
  }
  const Homography h = geometry::normalized(geometry::fit_road_homography(c));
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity() / std::sqrt(3.0);
  EXPECT_LT((h.m - id).norm(), 1e-12);
}

TEST(Homography, TooFewPoints) {
  std::vector<Correspondence> c = {{{0, 0}, {0, 0, 0}}, {{1, 0}, {1, 0, 0}}, {{0, 1}, {0, 1, 0}}};
  EXPECT_ERROR(geometry::fit_road_homography(c), ErrorKind::kTooFewPoints);
  EXPECT_ERROR(geometry::fit_road_homography(std::vector<Correspondence>{}), ErrorKind::kTooFewPoints);
}

TEST(Homography, CollinearPointsAreDegenerate) {
  std::vector<Correspondence> c;
  for (int i = 0; i < 6; ++i) c.push_back({{double(i), 2.0 * i}, {double(i), 0.5 * i, 0}});
  EXPECT_ERROR(geometry::fit_road_homography(c), ErrorKind::kDegenerateConfiguration);
}

TEST(Homography, ExactLaneTicksRecovered) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_pole_camera(rng);
    const auto ticks = testing::lane_ticks(p, testing::aim_x(p), trial % 2 ? 1.0 : -1.0, 2);
    ASSERT_EQ(ticks.size(), 12u);
    const Homography h = geometry::fit_road_homography(ticks);
    EXPECT_LT(geometry::reprojection_rmse(h, ticks), 1e-9);
    for (const auto& c : ticks) {
      const RoadPoint r = geometry::image_to_road(h, c.image);
      EXPECT_NEAR(r.x, c.road.x, 1e-9);
      EXPECT_NEAR(r.y, c.road.y, 1e-9);
      EXPECT_EQ(r.z, 0.0);
    }
    // Same map as the generating camera, up to scale.
    const Homography truth = geometry::normalized({testing::road_to_image(p).inverse()});
    EXPECT_LT((geometry::normalized(h).m - truth.m).norm(), 1e-9);
  }
}

TEST(Homography, EquivariantUnderPixelScaling) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing::random_pole_camera(rng);
    auto ticks = testing::lane_ticks(p, testing::aim_x(p), 1.0);
    for (auto& c : ticks) {
      c.image.u += rng.normal(0.0, 1.0);
      c.image.v += rng.normal(0.0, 1.0);
    }
    const double s = rng.uniform(0.25, 4.0);
    auto scaled = ticks;
    for (auto& c : scaled) {
      c.image.u *= s;
      c.image.v *= s;
    }
    const Homography h = geometry::fit_road_homography(ticks);
    Homography hs = geometry::fit_road_homography(scaled);
    hs.m = hs.m * Eigen::DiagonalMatrix<double, 3>(s, s, 1.0);
    EXPECT_LT((geometry::normalized(h).m - geometry::normalized(hs).m).norm(), 1e-6);
  }
}

TEST(Homography, ImageToRoad) {
  const RoadPoint r = geometry::image_to_road(Homography{}, {5, 7});
  EXPECT_EQ(r.x, 5.0);
  EXPECT_EQ(r.y, 7.0);
  EXPECT_EQ(r.z, 0.0);
}

TEST(Homography, HorizonIsAtInfinity) {
  Homography h;
  h.m << 1, 0, 0, 0, 1, 0, 0.002, 0.001, -1.0;
  // 0.002 u + 0.001 v - 1 = 0 at (400, 200).
  EXPECT_ERROR(geometry::image_to_road(h, {400, 200}), ErrorKind::kAtInfinity);
  EXPECT_NO_THROW(geometry::image_to_road(h, {400, 100}));
}

TEST(Homography, NormalizedIsScaleInvariant) {
  Homography h;
  h.m << 1, 2, 3, 4, 5, 6, 7, 8, 1e-17;
  Homography g;
  g.m = -3.5 * h.m;
  EXPECT_LT((geometry::normalized(h).m - geometry::normalized(g).m).norm(), 1e-15);
  EXPECT_NEAR(geometry::normalized(h).m.norm(), 1.0, 1e-15);
}

TEST(VerticalLines, TwoLinesCrossing) {
  std::vector<geometry::LineSegment> lines = {{{0, 0}, {200, 100}}, {{100, 0}, {100, 80}}};
  const ImagePoint p = geometry::intersect_vertical_lines(lines);
  EXPECT_NEAR(p.u, 100.0, 1e-9);
  EXPECT_NEAR(p.v, 50.0, 1e-9);
}

TEST(VerticalLines, NoisyLinesThroughFarPoint) {
  Rng rng(2024);
  const ImagePoint vp{1920, -4000};
  std::vector<geometry::LineSegment> lines;
  for (int i = 0; i < 10; ++i) {
    const double u = rng.uniform(200, 3600), v = rng.uniform(1200, 2000);
    const double len = rng.uniform(300, 600);
    const double dx = vp.u - u, dy = vp.v - v, n = std::hypot(dx, dy);
    geometry::LineSegment s{{u, v}, {u + dx / n * len, v + dy / n * len}};
    s.a.u += rng.normal(0, 0.5);
    s.a.v += rng.normal(0, 0.5);
    s.b.u += rng.normal(0, 0.5);
    s.b.v += rng.normal(0, 0.5);
    lines.push_back(s);
  }
  const ImagePoint p = geometry::intersect_vertical_lines(lines);
  EXPECT_LT(std::hypot(p.u - vp.u, p.v - vp.v), 50.0);

  // Same least-squares point from an SVD solve of the stacked line equations.
  Eigen::MatrixXd a(lines.size(), 2);
  Eigen::VectorXd b(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Eigen::Vector2d d(lines[i].b.u - lines[i].a.u, lines[i].b.v - lines[i].a.v);
    const Eigen::Vector2d n = Eigen::Vector2d(-d.y(), d.x()).normalized();
    a.row(i) = n.transpose();
    b(i) = n.dot(Eigen::Vector2d(lines[i].a.u, lines[i].a.v));
  }
  const Eigen::Vector2d ref = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  EXPECT_NEAR(p.u, ref.x(), 1e-6);
  EXPECT_NEAR(p.v, ref.y(), 1e-6);
}

TEST(VerticalLines, ParallelLines) {
  std::vector<geometry::LineSegment> lines = {{{0, 0}, {0, 100}}, {{50, 0}, {50, 100}}};
  EXPECT_ERROR(geometry::intersect_vertical_lines(lines), ErrorKind::kParallelLines);
}

struct ProjectionFixture {
  Eigen::Matrix<double, 3, 4> p;
  Homography h_inv;
  ImagePoint vp;
  std::vector<geometry::HeightSample> samples;
};

ProjectionFixture make_projection_fixture(Rng& rng) {
  ProjectionFixture f;
  f.p = testing::random_pole_camera(rng);
  f.h_inv.m = testing::road_to_image(f.p);
  const Eigen::Vector3d vz = f.p.col(2);
  f.vp = {vz.x() / vz.z(), vz.y() / vz.z()};
  const double xc = testing::aim_x(f.p);
  for (int i = 0; i < 4; ++i) {
    const RoadPoint q{xc + rng.uniform(-60, 60), -rng.uniform(6, 50), rng.uniform(4, 15)};
    f.samples.push_back({q, testing::pixel(f.p, q)});
  }
  return f;
}

TEST(Projection, RecoversSyntheticCamera) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = make_projection_fixture(rng);
    const auto proj = geometry::fit_projection(f.h_inv, f.vp, f.samples);
    EXPECT_LT(std::sqrt(geometry::projection_mse(proj, f.samples)), 1e-6);
    // A 6 ft box corner.
    const RoadPoint corner{testing::aim_x(f.p) + 12.0, -18.0, 6.0};
    const ImagePoint a = geometry::project_point(proj, corner);
    const ImagePoint b = testing::pixel(f.p, corner);
    EXPECT_NEAR(a.u, b.u, 1e-6);
    EXPECT_NEAR(a.v, b.v, 1e-6);
  }
}

TEST(Projection, ColumnsShareHomography) {
  Rng rng(6);
  const auto f = make_projection_fixture(rng);
  const auto proj = geometry::fit_projection(f.h_inv, f.vp, f.samples);
  EXPECT_EQ(proj.p.col(0), f.h_inv.m.col(0));
  EXPECT_EQ(proj.p.col(1), f.h_inv.m.col(1));
  EXPECT_EQ(proj.p.col(3), f.h_inv.m.col(2));
  // z = 0 points project exactly as the embedded homography maps them.
  for (int i = 0; i < 50; ++i) {
    const RoadPoint q{testing::aim_x(f.p) + rng.uniform(-80, 80), rng.uniform(-50, 50), 0.0};
    const ImagePoint a = geometry::project_point(proj, q);
    const Eigen::Vector3d hq = f.h_inv.m * Eigen::Vector3d(q.x, q.y, 1.0);
    EXPECT_EQ(a.u, hq.x() / hq.z());
    EXPECT_EQ(a.v, hq.y() / hq.z());
  }
}

TEST(Projection, NeedsAbovePlaneSamples) {
  Rng rng(8);
  auto f = make_projection_fixture(rng);
  for (auto& s : f.samples) s.road.z = 0.0;
  EXPECT_ERROR(geometry::fit_projection(f.h_inv, f.vp, f.samples), ErrorKind::kNoAbovePlaneSamples);
  EXPECT_ERROR(geometry::fit_projection(f.h_inv, f.vp, {}), ErrorKind::kNoAbovePlaneSamples);
}

TEST(Projection, RoundTripThroughRoadPlane) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = make_projection_fixture(rng);
    const auto proj = geometry::fit_projection(f.h_inv, f.vp, f.samples);
    const Homography h = geometry::inverse(f.h_inv);
    for (int i = 0; i < 20; ++i) {
      const RoadPoint q{testing::aim_x(f.p) + rng.uniform(-80, 80), rng.uniform(-50, 50), 0.0};
      const RoadPoint r = geometry::image_to_road(h, geometry::project_point(proj, q));
      EXPECT_NEAR(r.x, q.x, 1e-6);
      EXPECT_NEAR(r.y, q.y, 1e-6);
    }
  }
}

TEST(RoadToImage, OrthographicEmbedding) {
  geometry::CameraProjection proj;
  proj.p << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1;
  Box3D b;
  b.l = b.w = b.h = 1.0;
  const auto px = geometry::road_to_image(proj, b);
  const auto corners = box_corners(b);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(px[i].u, corners[i].x);
    EXPECT_EQ(px[i].v, corners[i].y);
  }
  // Corner order: rear-bottom-left first; left is +y for an EB box.
  EXPECT_EQ(corners[0].x, 0.0);
  EXPECT_EQ(corners[0].y, 0.5);
  EXPECT_EQ(corners[1].y, -0.5);
  EXPECT_EQ(corners[2].x, 1.0);
  EXPECT_EQ(corners[4].z, 1.0);
}

TEST(RoadToImage, MatchesDirectMultiply) {
  Rng rng(10);
  const auto f = make_projection_fixture(rng);
  const auto proj = geometry::fit_projection(f.h_inv, f.vp, f.samples);
  Box3D b{testing::aim_x(f.p), -18.0, 15.5, 6.2, 5.6, Direction::kWB, VehicleClass::kMidsize};
  const auto px = geometry::road_to_image(proj, b);
  const auto corners = box_corners(b);
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector3d h = proj.p * Eigen::Vector4d(corners[i].x, corners[i].y, corners[i].z, 1.0);
    EXPECT_NEAR(px[i].u, h.x() / h.z(), 1e-9);
    EXPECT_NEAR(px[i].v, h.y() / h.z(), 1e-9);
  }
}

TEST(RoadToImage, BehindCameraIsAtInfinity) {
  geometry::CameraProjection proj;
  // w = x: points with x <= 0 are on or behind the camera plane.
  proj.p << 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0;
  Box3D b{-5.0, 0.0, 2.0, 1.0, 1.0};
  EXPECT_ERROR(geometry::road_to_image(proj, b), ErrorKind::kAtInfinity);
  b.x = 1.0;
  EXPECT_NO_THROW(geometry::road_to_image(proj, b));
}

TEST(Curve, ConstantLine) {
  std::vector<RoadPoint> pts = {{0, 2, 0}, {10, 2, 0}, {25, 2, 0}, {40, 2, 0}};
  const auto c = geometry::fit_curve_offset(pts);
  EXPECT_NEAR(c.c0, 2.0, 1e-12);
  EXPECT_NEAR(c.c1, 0.0, 1e-12);
  EXPECT_NEAR(c.c2, 0.0, 1e-12);
}

TEST(Curve, ExactQuadratic) {
  std::vector<RoadPoint> pts;
  for (double x = -50; x <= 250; x += 20) pts.push_back({x, 0.001 * x * x + 0.1 * x + 3, 0});
  const auto c = geometry::fit_curve_offset(pts);
  EXPECT_NEAR(c.c2, 0.001, 1e-9);
  EXPECT_NEAR(c.c1, 0.1, 1e-9);
  EXPECT_NEAR(c.c0, 3.0, 1e-9);
}

TEST(Curve, Preconditions) {
  EXPECT_ERROR(geometry::fit_curve_offset(std::vector<RoadPoint>{{0, 1, 0}, {1, 1, 0}}), ErrorKind::kTooFewPoints);
  EXPECT_ERROR(geometry::fit_curve_offset(std::vector<RoadPoint>{{3, 1, 0}, {3, 2, 0}, {3, 4, 0}}),
               ErrorKind::kDegenerateX);
}

TEST(Curve, ApplyCurvature) {
  const RoadPoint p{10, 5, 0};
  const RoadPoint same = geometry::apply_curvature({}, p);
  EXPECT_EQ(same.y, 5.0);
  geometry::CurveOffset c{0.001, 0.1, 3.0};
  const RoadPoint q = geometry::apply_curvature(c, p);
  EXPECT_NEAR(q.y, 0.9, 1e-12);
  EXPECT_EQ(q.x, 10.0);
  const RoadPoint back = geometry::apply_curvature(c, q, true);
  EXPECT_EQ(back.y, p.y);
}

TEST(Curve, ForwardInverseRoundTrip) {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    geometry::CurveOffset c{rng.uniform(-1e-3, 1e-3), rng.uniform(-0.1, 0.1), rng.uniform(-5, 5)};
    const RoadPoint p{rng.uniform(-100, 2100), rng.uniform(-60, 60), rng.uniform(0, 15)};
    const RoadPoint q = geometry::apply_curvature(c, p);
    const RoadPoint r = geometry::apply_curvature(c, q, true);
    // (y - f) + f is exact unless the subtraction rounds; then it is off by
    // at most one rounding of the larger operand.
    const double scale = std::max({std::abs(p.y), std::abs(q.y), std::abs(c(p.x))});
    EXPECT_LE(std::abs(r.y - p.y), std::numeric_limits<double>::epsilon() * scale);
    EXPECT_EQ(r.x, p.x);
    EXPECT_EQ(r.z, p.z);
  }
}

TEST(Calibrate, FullSurveyOnSyntheticCamera) {
  Rng rng(13);
  const auto p = testing::random_pole_camera(rng);
  geometry::CalibrationPoints pts;
  const double xc = testing::aim_x(p);
  pts.ground = testing::lane_ticks(p, xc, -1.0);
  for (double x = xc - 60; x <= xc + 60; x += 20) pts.lane.push_back(testing::pixel(p, {x, 0.0, 0.0}));
  for (int k = 0; k < 4; ++k) {
    const RoadPoint base{xc + (k - 1.5) * 30.0, -54.0, 0.0}, top{base.x, base.y, 15.0};
    pts.verticals.push_back({testing::pixel(p, base), testing::pixel(p, top)});
    pts.heights.push_back({top, testing::pixel(p, top)});
  }
  const auto cal = geometry::calibrate(pts);
  EXPECT_LT(cal.homography_rmse_ft, 1e-9);
  EXPECT_NEAR(cal.curve.c0, 0.0, 1e-6);
  EXPECT_NEAR(cal.curve.c2, 0.0, 1e-9);
  const RoadPoint q{xc + 5, -30, 8};
  const ImagePoint a = geometry::project_point(cal.projection, q), b = testing::pixel(p, q);
  EXPECT_NEAR(a.u, b.u, 1e-5);
  EXPECT_NEAR(a.v, b.v, 1e-5);
}

}  // namespace
}  // namespace roadtrack
