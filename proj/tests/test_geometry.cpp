#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mangavec/geometry.hpp"
#include "mangavec/search.hpp"

using namespace mangavec;

namespace {

QBCurve random_curve(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return {{rng.uniform(lo, hi), rng.uniform(lo, hi)},
          {rng.uniform(lo, hi), rng.uniform(lo, hi)},
          {rng.uniform(lo, hi), rng.uniform(lo, hi)}};
}

}  // namespace

TEST(EvalSweep, CollinearMidpoint) {
  const QBCurve c{{0, 0}, {2, 0}, {4, 0}};
  const SweepCircle s = eval_sweep(c, {0.2, 0.4}, 0.5);
  EXPECT_DOUBLE_EQ(s.x, 2.0);
  EXPECT_DOUBLE_EQ(s.y, 0.0);
  EXPECT_NEAR(s.r, 0.3, 1e-15);
}

TEST(EvalSweep, EndpointsAreExact) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const QBCurve c = random_curve(rng);
    const RadiusPair r{rng.uniform(), rng.uniform()};
    const RadiusMap map{1.0, rng.uniform(1.0, 40.0)};
    const SweepCircle a = eval_sweep(c, r, 0.0, map);
    const SweepCircle b = eval_sweep(c, r, 1.0, map);
    ASSERT_EQ(a.x, c.p0.x);
    ASSERT_EQ(a.y, c.p0.y);
    ASSERT_EQ(a.r, map(r.r0));
    ASSERT_EQ(b.x, c.p2.x);
    ASSERT_EQ(b.y, c.p2.y);
    ASSERT_EQ(b.r, map(r.r2));
  }
}

TEST(EvalSweep, CentersStayInControlHull) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const QBCurve c = random_curve(rng);
    const double area = (c.p1 - c.p0).cross(c.p2 - c.p0);
    for (int j = 0; j <= 16; ++j) {
      const double k = j / 16.0;
      const SweepCircle s = eval_sweep(c, {0, 0}, k);
      const Vec2 p = s.center();
      // Barycentric signs against each edge, with a little slack for roundoff.
      const double e0 = (c.p1 - c.p0).cross(p - c.p0);
      const double e1 = (c.p2 - c.p1).cross(p - c.p1);
      const double e2 = (c.p0 - c.p2).cross(p - c.p2);
      const double tol = 1e-12;
      if (std::abs(area) > 1e-9) {
        const double sgn = area > 0 ? 1 : -1;
        ASSERT_GE(sgn * e0, -tol);
        ASSERT_GE(sgn * e1, -tol);
        ASSERT_GE(sgn * e2, -tol);
      }
      ASSERT_GE(p.x, std::min({c.p0.x, c.p1.x, c.p2.x}) - tol);
      ASSERT_LE(p.x, std::max({c.p0.x, c.p1.x, c.p2.x}) + tol);
      ASSERT_GE(p.y, std::min({c.p0.y, c.p1.y, c.p2.y}) - tol);
      ASSERT_LE(p.y, std::max({c.p0.y, c.p1.y, c.p2.y}) + tol);
    }
  }
}

TEST(QBCurve, NormalizedClampsToUnitSquare) {
  const QBCurve c = QBCurve::normalized({-0.5, 0.2}, {1.5, 2.0}, {0.3, -1.0});
  EXPECT_EQ(c.p0.x, 0.0);
  EXPECT_EQ(c.p1.x, 1.0);
  EXPECT_EQ(c.p1.y, 1.0);
  EXPECT_EQ(c.p2.y, 0.0);
}

TEST(TangentSlope, StartMatchesFirstLeg) {
  const QBCurve c{{0.1, 0.2}, {0.5, 0.9}, {0.8, 0.3}};
  const TangentSlope t = tangent_slope(c, 0.0);
  ASSERT_EQ(t.kind, TangentSlope::Kind::finite);
  EXPECT_NEAR(t.slope, (0.9 - 0.2) / (0.5 - 0.1), 1e-12);
}

TEST(TangentSlope, HorizontalAndVertical) {
  const QBCurve h{{0, 0}, {1, 0}, {2, 0}};
  const QBCurve v{{0, 0}, {0, 1}, {0, 2}};
  for (double k : {0.0, 0.3, 0.5, 1.0}) {
    const TangentSlope th = tangent_slope(h, k);
    EXPECT_EQ(th.kind, TangentSlope::Kind::finite);
    EXPECT_EQ(th.slope, 0.0);
    EXPECT_EQ(tangent_slope(v, k).kind, TangentSlope::Kind::vertical);
  }
}

TEST(TangentSlope, DegenerateCurveIsFlagged) {
  const QBCurve p{{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
  EXPECT_EQ(tangent_slope(p, 0.5).kind, TangentSlope::Kind::degenerate);
  const Vec2 t = unit_tangent(p, 0.5);
  EXPECT_EQ(t.x, 1.0);
  EXPECT_EQ(t.y, 0.0);
}

TEST(TangentSlope, AgreesWithFiniteDifferences) {
  Rng rng(3);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const QBCurve c = random_curve(rng);
    const double k = rng.uniform(0.01, 0.99);
    const TangentSlope t = tangent_slope(c, k);
    if (t.kind != TangentSlope::Kind::finite) continue;
    const double h = 1e-6;
    const SweepCircle a = eval_sweep(c, {0, 0}, k - h);
    const SweepCircle b = eval_sweep(c, {0, 0}, k + h);
    const double dx = b.x - a.x, dy = b.y - a.y;
    // Near-vertical tangents amplify difference noise; skip them.
    if (std::abs(dx) < 1e-4 * std::hypot(dx, dy) || std::hypot(dx, dy) < 1e-9) continue;
    const double fd = dy / dx;
    ASSERT_LT(std::abs(fd - t.slope), 1e-4 * std::max(1.0, std::abs(t.slope))) << i;
    ++checked;
  }
  EXPECT_GT(checked, 9000);
}

TEST(OffsetPoints, AxisAlignedTangents) {
  const QBCurve h{{0, 0.5}, {0.5, 0.5}, {1, 0.5}};
  const SweepCircle ch = eval_sweep(h, {0.1, 0.1}, 0.5);
  auto [l, r] = offset_points(ch, h, 0.5);
  EXPECT_NEAR(l.x, ch.x, 1e-15);
  EXPECT_NEAR(r.x, ch.x, 1e-15);
  EXPECT_NEAR(std::abs(l.y - ch.y), ch.r, 1e-15);
  EXPECT_NEAR(l.y + r.y, 2 * ch.y, 1e-15);

  const QBCurve v{{0.5, 0}, {0.5, 0.5}, {0.5, 1}};
  const SweepCircle cv = eval_sweep(v, {0.2, 0.2}, 0.25);
  std::tie(l, r) = offset_points(cv, v, 0.25);
  EXPECT_NEAR(l.y, cv.y, 1e-15);
  EXPECT_NEAR(r.y, cv.y, 1e-15);
  EXPECT_NEAR(std::abs(l.x - cv.x), cv.r, 1e-15);
  EXPECT_NEAR(l.x + r.x, 2 * cv.x, 1e-15);
}

TEST(OffsetPoints, FortyFiveDegrees) {
  const QBCurve c{{0, 0}, {1, 1}, {2, 2}};
  const SweepCircle s{1, 1, std::sqrt(2.0)};
  auto [l, r] = offset_points(s, c, 0.5);
  // Normal from a finite-difference tangent rotated by +90 degrees.
  const double h = 1e-6;
  const Vec2 d = c.at(0.5 + h) - c.at(0.5 - h);
  const Vec2 n = Vec2{-d.y, d.x} / d.norm();
  EXPECT_NEAR(l.x - 1, n.x * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(l.y - 1, n.y * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(l.x - 1, -1.0, 1e-9);
  EXPECT_NEAR(l.y - 1, 1.0, 1e-9);
  EXPECT_NEAR(r.x - 1, 1.0, 1e-9);
  EXPECT_NEAR(r.y - 1, -1.0, 1e-9);
}

TEST(OffsetPoints, LieOnTheCircle) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const QBCurve c = random_curve(rng);
    const double k = rng.uniform();
    const SweepCircle s = eval_sweep(c, {rng.uniform(), rng.uniform()}, k, {1.0, 31.0});
    auto [l, r] = offset_points(s, c, k);
    ASSERT_LT(std::abs(distance(l, s.center()) - s.r), 1e-9);
    ASSERT_LT(std::abs(distance(r, s.center()) - s.r), 1e-9);
  }
}

TEST(FitQbc, RecoversGeneratorCurve) {
  Rng rng(9);
  for (int i = 0; i < 10000; ++i) {
    const QBCurve c = random_curve(rng, -50, 50);
    std::array<Vec2, 5> pts;
    for (int j = 0; j < 5; ++j) pts[j] = c.at(j / 4.0);
    const QBCurve f = fit_qbc(pts);
    ASSERT_LT(distance(f.p1, c.p1), 1e-9) << i;
    for (int j = 0; j < 5; ++j) ASSERT_LT(distance(f.at(j / 4.0), pts[j]), 1e-9);
  }
}

TEST(FitQbc, CollinearGivesMidpoint) {
  std::array<Vec2, 5> pts;
  for (int j = 0; j < 5; ++j) pts[j] = {1.0 + 2.0 * j, 3.0 - 0.5 * j};
  const QBCurve f = fit_qbc(pts);
  EXPECT_NEAR(f.p1.x, 5.0, 1e-12);
  EXPECT_NEAR(f.p1.y, 2.0, 1e-12);

  std::array<Vec2, 5> same;
  same.fill({0.3, 0.3});
  const QBCurve d = fit_qbc(same);
  EXPECT_EQ(d.p1.x, 0.3);
  EXPECT_EQ(d.p1.y, 0.3);
}

TEST(FitQbc, ThirtyDegreeArc) {
  // Reference from tests/oracles/arc_fit_reference.py.
  const double R = 7.0;
  std::array<Vec2, 5> pts;
  for (int j = 0; j < 5; ++j) {
    const double a = (std::numbers::pi / 6) * j / 4.0;
    pts[j] = {R * std::cos(a), R * std::sin(a)};
  }
  const QBCurve f = fit_qbc(pts);
  EXPECT_NEAR(f.p1.x / R, 0.998789047278, 1e-9);
  EXPECT_NEAR(f.p1.y / R, 0.267624718627, 1e-9);
  double worst = 0;
  for (int j = 0; j <= 100000; ++j) worst = std::max(worst, std::abs(f.at(j / 1e5).norm() - R));
  EXPECT_NEAR(worst / R, 1.581273e-4, 1e-8);
  EXPECT_LT(worst / R, 0.002);
}
