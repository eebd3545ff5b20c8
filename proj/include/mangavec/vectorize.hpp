#pragma once

// Action -> vector stroke conversion and SVG serialization.
//
// A stroke becomes two end circles plus one closed outline made only of
// quadratic segments: a fitted left edge, a two-segment end cap, the
// fitted right edge walked backwards and a two-segment start cap.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mangavec/doc.hpp"
#include "mangavec/geometry.hpp"
#include "mangavec/image.hpp"
#include "mangavec/raster.hpp"
#include "mangavec/reward.hpp"

namespace mangavec {

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<double, 5> kEdgeSampleParams{0.0, 0.25, 0.5, 0.75, 1.0};

namespace detail {

// Quarter circle from center + r*from to center + r*to, where `to` is
// `from` rotated by +-90 degrees, fitted through five points.
inline QBCurve quarter_arc(Vec2 center, double r, Vec2 from, Vec2 to) {
  std::array<Vec2, 5> pts;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double a = (std::numbers::pi / 2) * static_cast<double>(i) / 4.0;
    pts[i] = center + (from * std::cos(a) + to * std::sin(a)) * r;
  }
  pts.front() = center + from * r;
  pts.back() = center + to * r;
  return fit_qbc(pts);
}

inline QBCurve reversed(const QBCurve& q) { return {q.p2, q.p1, q.p0}; }

}  // namespace detail

// Converts an action into a vector stroke in the pixel frame of a patch of
// the given box size (origin at the patch's top-left corner).
inline VectorStroke action_to_vector(const Action& raw, const PixelBox& patch_box) {
  const Action action = raw.clamped();
  const int w = patch_box.width;
  const int h = patch_box.height;
  const RadiusMap rmap = pixel_radius_map(w, h);
  const QBCurve unit = action.curve();
  const QBCurve curve = unit.scaled(w, h);
  const RadiusPair radii = action.radii();

  VectorStroke out;
  out.gray = quantize_gray(action.g);

  if (unit.degenerate()) {
    const double r = rmap(std::max(radii.r0, radii.r2));
    out.start_circle = out.end_circle = {curve.p0.x, curve.p0.y, r};
    return out;
  }

  std::array<Vec2, 5> left, right;
  std::array<SweepCircle, 5> circles;
  for (std::size_t i = 0; i < kEdgeSampleParams.size(); ++i) {
    const double k = kEdgeSampleParams[i];
    circles[i] = eval_sweep(curve, radii, k, rmap);
    std::tie(left[i], right[i]) = offset_points(circles[i], curve, k);
  }
  out.start_circle = circles.front();
  out.end_circle = circles.back();

  const QBCurve left_edge = fit_qbc(left);
  const QBCurve right_edge = fit_qbc(right);

  const Vec2 t1 = unit_tangent(curve, 1.0);
  const Vec2 n1{-t1.y, t1.x};
  const Vec2 t0 = unit_tangent(curve, 0.0);
  const Vec2 n0{-t0.y, t0.x};
  const SweepCircle& s = circles.front();
  const SweepCircle& e = circles.back();

  out.outline.reserve(6);
  out.outline.push_back(left_edge);
  out.outline.push_back(detail::quarter_arc(e.center(), e.r, n1, t1));
  out.outline.push_back(detail::quarter_arc(e.center(), e.r, t1, n1 * -1.0));
  out.outline.push_back(detail::reversed(right_edge));
  out.outline.push_back(detail::quarter_arc(s.center(), s.r, n0 * -1.0, t0 * -1.0));
  out.outline.push_back(detail::quarter_arc(s.center(), s.r, t0 * -1.0, n0));

  // Stitch exactly: each segment starts where the previous one ended.
  for (std::size_t i = 1; i < out.outline.size(); ++i) out.outline[i].p0 = out.outline[i - 1].p2;
  out.outline.back().p2 = out.outline.front().p0;
  return out;
}

// ---------------------------------------------------------------------------
// SVG output
//
// Layout (attribute order fixed, one element per line):
//   <?xml ...?>
//   <svg xmlns=... version="1.1" width=W height=H viewBox="0 0 W H">
//   <rect x="0" y="0" width=W height=H fill="#ffffff"/>
//   <defs>                                   only if some stroke is clipped
//   <clipPath id="cK"><rect x="0" y="0" width=w height=h/></clipPath>
//   </defs>
//   <g transform="translate(tx ty)[ scale(s)]" fill="#gggggg"[ clip-path="url(#cK)"]>
//   <circle cx cy r/> <circle cx cy r/> <path d="M..Q..Z"/>
//   </g>
//   </svg>
// Coordinates use two decimals.

namespace detail {

inline void append_fixed2(std::string& out, double v) {
  char buf[40];
  const double rounded = std::round(v * 100.0) / 100.0;
  std::snprintf(buf, sizeof buf, "%.2f", rounded == 0.0 ? 0.0 : rounded);
  out += buf;
}

inline void append_gray(std::string& out, double g) {
  const int v = static_cast<int>(std::lround(std::clamp(g, 0.0, 1.0) * 255.0));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", v, v, v);
  out += buf;
}

inline void append_circle(std::string& out, const SweepCircle& c) {
  out += "<circle cx=\"";
  append_fixed2(out, c.x);
  out += "\" cy=\"";
  append_fixed2(out, c.y);
  out += "\" r=\"";
  append_fixed2(out, c.r);
  out += "\"/>\n";
}

inline void append_point(std::string& out, Vec2 p) {
  append_fixed2(out, p.x);
  out += ' ';
  append_fixed2(out, p.y);
}

}  // namespace detail

inline std::string serialize_svg(const VectorDoc& doc) {
  std::string out;
  out.reserve(256 + doc.strokes.size() * 256);
  const std::string w = std::to_string(doc.width);
  const std::string h = std::to_string(doc.height);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w +
         "\" height=\"" + h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"#ffffff\"/>\n";

  // One clip rectangle per distinct patch size, in order of first use.  The
  // rectangle is in the group's local units, so every patch of a size shares it.
  std::vector<std::pair<std::string, std::string>> clips;
  std::vector<int> clip_id(doc.strokes.size(), -1);
  for (std::size_t i = 0; i < doc.strokes.size(); ++i) {
    const Placement& pl = doc.strokes[i].placement;
    if (!pl.clipped()) continue;
    std::string cw, ch;
    detail::append_fixed2(cw, pl.clip_w);
    detail::append_fixed2(ch, pl.clip_h);
    auto it = std::find(clips.begin(), clips.end(), std::pair{cw, ch});
    clip_id[i] = static_cast<int>(it - clips.begin());
    if (it == clips.end()) clips.emplace_back(cw, ch);
  }
  if (!clips.empty()) {
    out += "<defs>\n";
    for (std::size_t k = 0; k < clips.size(); ++k)
      out += "<clipPath id=\"c" + std::to_string(k) + "\"><rect x=\"0\" y=\"0\" width=\"" + clips[k].first +
             "\" height=\"" + clips[k].second + "\"/></clipPath>\n";
    out += "</defs>\n";
  }

  for (std::size_t i = 0; i < doc.strokes.size(); ++i) {
    const PlacedStroke& ps = doc.strokes[i];
    out += "<g transform=\"translate(";
    detail::append_fixed2(out, ps.placement.tx);
    out += ' ';
    detail::append_fixed2(out, ps.placement.ty);
    out += ')';
    if (ps.placement.scale != 1.0) {
      out += " scale(";
      detail::append_fixed2(out, ps.placement.scale);
      out += ')';
    }
    out += "\" fill=\"";
    detail::append_gray(out, ps.stroke.gray);
    out += '"';
    if (clip_id[i] >= 0) out += " clip-path=\"url(#c" + std::to_string(clip_id[i]) + ")\"";
    out += ">\n";
    const VectorStroke& s = ps.stroke;
    detail::append_circle(out, s.start_circle);
    if (!s.single_disc()) {
      detail::append_circle(out, s.end_circle);
      out += "<path d=\"M";
      detail::append_point(out, s.outline.front().p0);
      for (const QBCurve& q : s.outline) {
        out += 'Q';
        detail::append_point(out, q.p1);
        out += ' ';
        detail::append_point(out, q.p2);
      }
      out += "Z\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

inline std::size_t doc_size_bytes(const VectorDoc& doc) { return serialize_svg(doc).size(); }

// Writes to a temporary sibling first and renames it into place, so a
// failed write never leaves a partial file at `path`.
inline void write_text_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw io_error("write failed for '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_error("cannot move output into place at '" + path + "'");
  }
}

inline void write_svg(const VectorDoc& doc, const std::string& path) {
  write_text_atomically(path, serialize_svg(doc));
}

}  // namespace mangavec
