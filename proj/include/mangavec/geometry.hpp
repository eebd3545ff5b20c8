#pragma once

// Quadratic Bezier math used by the drawing module and the vectorizer.
//
// A stroke is a quadratic Bezier centre line swept by circles whose radius
// is interpolated linearly between the two end radii.  Everything in this
// header is pure and works in whatever coordinate space the caller uses;
// only QBCurve::normalized() clamps to the unit square.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace mangavec {

template <typename T>
struct basic_vec2 {
  T x{};
  T y{};

  constexpr basic_vec2 operator+(basic_vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr basic_vec2 operator-(basic_vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr basic_vec2 operator*(T s) const { return {x * s, y * s}; }
  constexpr basic_vec2 operator/(T s) const { return {x / s, y / s}; }
  constexpr bool operator==(const basic_vec2&) const = default;

  T dot(basic_vec2 o) const { return x * o.x + y * o.y; }
  T cross(basic_vec2 o) const { return x * o.y - y * o.x; }
  T norm() const { return std::hypot(x, y); }
};

template <typename T>
constexpr basic_vec2<T> operator*(T s, basic_vec2<T> v) { return v * s; }

using Vec2 = basic_vec2<double>;

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline Vec2 midpoint(Vec2 a, Vec2 b) { return (a + b) * 0.5; }

// Control points closer than this are considered coincident.
inline constexpr double kDegenerateEps = 1e-6;

struct QBCurve {
  Vec2 p0, p1, p2;

  // Clamps every coordinate into [0,1]; non-finite values become 0.
  static QBCurve normalized(Vec2 a, Vec2 b, Vec2 c) {
    auto clamp01 = [](double v) { return std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0; };
    auto fix = [&](Vec2 p) { return Vec2{clamp01(p.x), clamp01(p.y)}; };
    return {fix(a), fix(b), fix(c)};
  }

  Vec2 at(double k) const {
    const double u = 1.0 - k;
    return p0 * (u * u) + p1 * (2.0 * u * k) + p2 * (k * k);
  }

  // dB/dk.
  Vec2 derivative(double k) const {
    return ((p1 - p0) * (1.0 - k) + (p2 - p1) * k) * 2.0;
  }

  QBCurve scaled(double sx, double sy) const {
    auto s = [&](Vec2 p) { return Vec2{p.x * sx, p.y * sy}; };
    return {s(p0), s(p1), s(p2)};
  }

  bool degenerate() const {
    return distance(p0, p1) < kDegenerateEps && distance(p1, p2) < kDegenerateEps &&
           distance(p0, p2) < kDegenerateEps;
  }

  // |p0p1| + |p1p2|, an upper bound on arc length.
  double control_polygon_length() const { return distance(p0, p1) + distance(p1, p2); }
};

struct SweepCircle {
  double x = 0, y = 0, r = 0;
  Vec2 center() const { return {x, y}; }
};

struct RadiusPair {
  double r0 = 0, r2 = 0;
};

// Maps a normalized radius onto the radius used for sweeping.  The identity
// map is used when the caller already works in final units.
struct RadiusMap {
  double offset = 0.0;
  double scale = 1.0;
  double operator()(double r) const { return offset + r * scale; }
};

inline SweepCircle eval_sweep(const QBCurve& curve, RadiusPair radii, double k,
                              RadiusMap map = {}) {
  // Exact endpoints, independent of rounding in the Bernstein blend.
  if (k <= 0.0) return {curve.p0.x, curve.p0.y, map(radii.r0)};
  if (k >= 1.0) return {curve.p2.x, curve.p2.y, map(radii.r2)};
  const Vec2 c = curve.at(k);
  return {c.x, c.y, map((1.0 - k) * radii.r0 + k * radii.r2)};
}

struct TangentSlope {
  enum class Kind { finite, vertical, degenerate };
  Kind kind = Kind::finite;
  double slope = 0.0;  // dy/dx, meaningful only when kind == finite
};

inline TangentSlope tangent_slope(const QBCurve& curve, double k) {
  if (curve.degenerate()) return {TangentSlope::Kind::degenerate, 0.0};
  const double num = (1.0 - k) * (curve.p1.y - curve.p0.y) + k * (curve.p2.y - curve.p1.y);
  const double den = (1.0 - k) * (curve.p1.x - curve.p0.x) + k * (curve.p2.x - curve.p1.x);
  if (den == 0.0) return {TangentSlope::Kind::vertical, 0.0};
  return {TangentSlope::Kind::finite, num / den};
}

// Unit travel direction at k.  Falls back to the chord direction where the
// derivative vanishes (cusp of a folded curve) and to +x for a point curve.
inline Vec2 unit_tangent(const QBCurve& curve, double k) {
  if (!curve.degenerate()) {
    const Vec2 d = curve.derivative(k);
    const double n = d.norm();
    if (n > 1e-12) return d / n;
    const Vec2 chord = curve.p2 - curve.p0;
    const double cn = chord.norm();
    if (cn > 1e-12) return chord / cn;
    const Vec2 leg = curve.p1 - curve.p0;
    const double ln = leg.norm();
    if (ln > 1e-12) return Vec2{-leg.y, leg.x} / ln;
  }
  return {1.0, 0.0};
}

// The two points on `circle` along the normal of the centre line at k.
// first is on the left of travel (+90 degrees from the tangent), second on
// the right.
inline std::pair<Vec2, Vec2> offset_points(const SweepCircle& circle, const QBCurve& curve,
                                           double k) {
  const Vec2 t = unit_tangent(curve, k);
  const Vec2 n{-t.y, t.x};
  const Vec2 c = circle.center();
  return {c + n * circle.r, c - n * circle.r};
}

// Parameters at which the three interior fit points are assumed to lie.
inline constexpr std::array<double, 3> kFitParams{0.25, 0.5, 0.75};

// Least-squares quadratic through five ordered points.  The first and last
// points are interpolated exactly; the middle control point is solved in
// closed form against the interior points at kFitParams.
inline QBCurve fit_qbc(const std::array<Vec2, 5>& pts) {
  const Vec2 a = pts.front();
  const Vec2 b = pts.back();

  const Vec2 chord = b - a;
  const double chord_len = chord.norm();
  double max_off = 0.0;
  double scale = chord_len;
  for (const Vec2& p : pts) {
    scale = std::max(scale, distance(p, a));
    if (chord_len > 0) max_off = std::max(max_off, std::abs(chord.cross(p - a)) / chord_len);
    else max_off = std::max(max_off, distance(p, a));
  }
  if (max_off <= 1e-12 * std::max(1.0, scale)) return {a, midpoint(a, b), b};

  Vec2 num{0, 0};
  double den = 0;
  for (std::size_t i = 0; i < kFitParams.size(); ++i) {
    const double k = kFitParams[i];
    const double u = 1.0 - k;
    const double basis = 2.0 * u * k;
    const Vec2 rest = pts[i + 1] - a * (u * u) - b * (k * k);
    num = num + rest * basis;
    den += basis * basis;
  }
  return {a, num / den, b};
}

}  // namespace mangavec
