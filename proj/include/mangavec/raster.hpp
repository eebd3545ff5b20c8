#pragma once

// The drawing module: renders actions into binary stroke masks, composites
// them onto canvases and rasterizes whole vector documents.
//
// Pixel (x, y) covers [x, x+1) x [y, y+1); a pixel belongs to a shape iff
// its centre (x+0.5, y+0.5) does.  Circles include their boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <vector>

#include "mangavec/doc.hpp"
#include "mangavec/geometry.hpp"
#include "mangavec/image.hpp"

namespace mangavec {

struct Action {
  double px0 = 0, py0 = 0, px1 = 0, py1 = 0, px2 = 0, py2 = 0;
  double r0 = 0, r2 = 0;
  double g = 0;

  static constexpr std::size_t kSize = 9;

  std::array<double, kSize> to_array() const { return {px0, py0, px1, py1, px2, py2, r0, r2, g}; }

  static Action from_array(const std::array<double, kSize>& a) {
    return Action{a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]}.clamped();
  }

  // Every field forced into [0,1]; NaN becomes 0.
  Action clamped() const {
    auto c = [](double v) { return std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : (v > 0 ? 1.0 : 0.0); };
    return {c(px0), c(py0), c(px1), c(py1), c(px2), c(py2), c(r0), c(r2), c(g)};
  }

  QBCurve curve() const { return QBCurve::normalized({px0, py0}, {px1, py1}, {px2, py2}); }
  RadiusPair radii() const { return {r0, r2}; }

  bool operator==(const Action&) const = default;
};

// Normalized radius to pixels: hairline (1 px) up to a quarter of the
// shorter patch side.
inline RadiusMap pixel_radius_map(int width, int height) {
  const double quarter = std::min(width, height) / 4.0;
  return {1.0, quarter - 1.0};
}

inline int sweep_sample_count(double polyline_length_px) {
  const double k = std::ceil(2.0 * polyline_length_px);
  return static_cast<int>(std::clamp(k, 16.0, 512.0));
}

struct StrokeRaster {
  Mask mask;
  double gray = 0.0;
  PixelBox bounds;  // tight box around set pixels; empty if none
};

namespace detail {

struct BoundsTracker {
  int x0, y0, x1, y1;
  BoundsTracker() : x0(1 << 30), y0(1 << 30), x1(-1), y1(-1) {}
  void add_span(int y, int xa, int xb) {
    x0 = std::min(x0, xa);
    x1 = std::max(x1, xb);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  PixelBox box() const {
    if (x1 < 0) return {};
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  }
};

inline void fill_disc(Mask& mask, double cx, double cy, double r, BoundsTracker& bt) {
  if (!(r >= 0)) return;
  const int w = mask.width();
  const int h = mask.height();
  const int ya = std::max(0, static_cast<int>(std::ceil(cy - r - 0.5)));
  const int yb = std::min(h - 1, static_cast<int>(std::floor(cy + r - 0.5)));
  const double r2 = r * r;
  for (int y = ya; y <= yb; ++y) {
    const double dy = y + 0.5 - cy;
    const double rem = r2 - dy * dy;
    if (rem < 0) continue;
    const double half = std::sqrt(rem);
    int xa = static_cast<int>(std::ceil(cx - half - 0.5));
    int xb = static_cast<int>(std::floor(cx + half - 0.5));
    xa = std::max(xa, 0);
    xb = std::min(xb, w - 1);
    if (xa > xb) continue;
    std::memset(&mask(xa, y), 1, static_cast<std::size_t>(xb - xa + 1));
    bt.add_span(y, xa, xb);
  }
}

// Fills a closed polygon with the nonzero winding rule.
inline void fill_polygon_nonzero(Mask& mask, const std::vector<Vec2>& poly, BoundsTracker& bt) {
  const std::size_t n = poly.size();
  if (n < 3) return;
  double ymin = poly[0].y, ymax = poly[0].y;
  for (const Vec2& p : poly) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int w = mask.width();
  const int ya = std::max(0, static_cast<int>(std::ceil(ymin - 0.5)));
  const int yb = std::min(mask.height() - 1, static_cast<int>(std::floor(ymax - 0.5)));

  struct Crossing {
    double x;
    int dir;
  };
  std::vector<Crossing> xs;
  for (int y = ya; y <= yb; ++y) {
    const double sy = y + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = poly[i];
      const Vec2 b = poly[(i + 1) % n];
      if ((a.y <= sy) == (b.y <= sy)) continue;
      const double t = (sy - a.y) / (b.y - a.y);
      xs.push_back({a.x + t * (b.x - a.x), b.y > a.y ? 1 : -1});
    }
    std::sort(xs.begin(), xs.end(), [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
    int winding = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      winding += xs[i].dir;
      if (winding == 0) continue;
      int xa = static_cast<int>(std::ceil(xs[i].x - 0.5));
      int xb = static_cast<int>(std::ceil(xs[i + 1].x - 0.5)) - 1;
      xa = std::max(xa, 0);
      xb = std::min(xb, w - 1);
      if (xa > xb) continue;
      std::memset(&mask(xa, y), 1, static_cast<std::size_t>(xb - xa + 1));
      bt.add_span(y, xa, xb);
    }
  }
}

inline int flatten_steps(const QBCurve& q) {
  const double len = q.control_polygon_length();
  return static_cast<int>(std::clamp(std::ceil(len / 1.5), 4.0, 64.0));
}

}  // namespace detail

// Reusable renderer; keeps a scratch mask so repeated renders at the same
// size do not allocate.
class StrokeRenderer {
 public:
  StrokeRenderer(int width, int height) : mask_(width, height, 0) {}

  int width() const { return mask_.width(); }
  int height() const { return mask_.height(); }

  // Renders `action` into the internal mask and returns the bounding box of
  // covered pixels.  Previously set pixels are cleared first.
  PixelBox render(const Action& action) {
    clear();
    const QBCurve curve = action.curve().scaled(mask_.width(), mask_.height());
    const RadiusMap rmap = pixel_radius_map(mask_.width(), mask_.height());
    const RadiusPair radii = action.radii();
    const int samples = sweep_sample_count(curve.control_polygon_length());
    detail::BoundsTracker bt;
    for (int i = 0; i < samples; ++i) {
      const double k = static_cast<double>(i) / (samples - 1);
      const SweepCircle c = eval_sweep(curve, radii, k, rmap);
      detail::fill_disc(mask_, c.x, c.y, c.r, bt);
    }
    bounds_ = bt.box();
    return bounds_;
  }

  const Mask& mask() const { return mask_; }
  PixelBox bounds() const { return bounds_; }

 private:
  void clear() {
    if (bounds_.empty()) return;
    for (int y = bounds_.y; y < bounds_.y1(); ++y)
      std::memset(&mask_(bounds_.x, y), 0, static_cast<std::size_t>(bounds_.width));
    bounds_ = {};
  }

  Mask mask_;
  PixelBox bounds_;
};

inline StrokeRaster render_stroke(const Action& action, int width, int height) {
  if (width < 8 || height < 8) throw shape_error("render_stroke: raster must be at least 8x8");
  StrokeRenderer r(width, height);
  const PixelBox box = r.render(action.clamped());
  return {r.mask(), action.clamped().g, box};
}

// Replace-within-mask compositing onto an existing canvas.
inline void composite_into(Canvas& canvas, const Mask& mask, double gray) {
  require_same_shape(canvas, mask, "composite");
  auto c = canvas.pixels();
  auto m = mask.pixels();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (m[i]) c[i] = gray;
}

inline Canvas composite(const Canvas& canvas, const StrokeRaster& stroke) {
  Canvas out = canvas;
  composite_into(out, stroke.mask, stroke.gray);
  return out;
}

// Coverage of a vector stroke placed by `placement` and then scaled by
// (sx, sy) into a raster.
inline PixelBox rasterize_stroke_into(Mask& mask, const VectorStroke& stroke,
                                      const Placement& placement, double sx, double sy) {
  detail::BoundsTracker bt;
  auto to_raster = [&](Vec2 p) {
    const Vec2 d = placement.apply(p);
    return Vec2{d.x * sx, d.y * sy};
  };
  // Circles stay circles only under uniform scaling; use the mean factor
  // otherwise.
  const double rscale = placement.scale * 0.5 * (sx + sy);
  for (const SweepCircle* c : {&stroke.start_circle, &stroke.end_circle}) {
    const Vec2 p = to_raster(c->center());
    detail::fill_disc(mask, p.x, p.y, c->r * rscale, bt);
  }
  if (!stroke.outline.empty()) {
    std::vector<Vec2> poly;
    for (const QBCurve& seg : stroke.outline) {
      const QBCurve q{to_raster(seg.p0), to_raster(seg.p1), to_raster(seg.p2)};
      const int steps = detail::flatten_steps(q);
      for (int i = 0; i < steps; ++i) poly.push_back(q.at(static_cast<double>(i) / steps));
    }
    detail::fill_polygon_nonzero(mask, poly, bt);
  }
  return bt.box();
}

// Rasterizes `doc` onto a white canvas of the given size, in paint order.
inline Canvas rasterize_doc(const VectorDoc& doc, int width, int height) {
  Canvas canvas = blank_canvas(width, height);
  if (doc.width <= 0 || doc.height <= 0) return canvas;
  const double sx = static_cast<double>(width) / doc.width;
  const double sy = static_cast<double>(height) / doc.height;
  Mask mask(width, height, 0);
  for (const PlacedStroke& ps : doc.strokes) {
    const Placement& pl = ps.placement;
    const PixelBox box = rasterize_stroke_into(mask, ps.stroke, pl, sx, sy);
    // Clip rectangle in raster units; a pixel is kept if its centre is inside.
    double cx0 = -1e300, cy0 = -1e300, cx1 = 1e300, cy1 = 1e300;
    if (pl.clipped()) {
      cx0 = pl.tx * sx, cx1 = (pl.tx + pl.clip_w * pl.scale) * sx;
      cy0 = pl.ty * sy, cy1 = (pl.ty + pl.clip_h * pl.scale) * sy;
    }
    for (int y = box.y; y < box.y1(); ++y) {
      const double py = y + 0.5;
      for (int x = box.x; x < box.x1(); ++x) {
        const double px = x + 0.5;
        if (!mask(x, y)) continue;
        mask(x, y) = 0;
        if (px >= cx0 && px < cx1 && py >= cy0 && py < cy1) canvas(x, y) = ps.stroke.gray;
      }
    }
  }
  return canvas;
}

}  // namespace mangavec
