#pragma once

#include <vector>

#include "mangavec/geometry.hpp"

namespace mangavec {

// One vectorized stroke in patch-local pixel units: the two end circles
// and a closed outline of quadratic segments (left edge, end cap, right
// edge reversed, start cap).  A point-like stroke has no outline and its
// two circles coincide.
struct VectorStroke {
  SweepCircle start_circle;
  SweepCircle end_circle;
  std::vector<QBCurve> outline;
  double gray = 0.0;

  bool single_disc() const { return outline.empty(); }
};

// Maps patch-local coordinates into document coordinates: p' = p*scale + t.
// A positive clip size limits the stroke to [0,clip_w] x [0,clip_h] in
// local units, i.e. to its own patch.
struct Placement {
  double tx = 0.0;
  double ty = 0.0;
  double scale = 1.0;
  double clip_w = 0.0;
  double clip_h = 0.0;

  bool clipped() const { return clip_w > 0 && clip_h > 0; }

  Vec2 apply(Vec2 p) const { return {p.x * scale + tx, p.y * scale + ty}; }
  bool operator==(const Placement&) const = default;
};

struct PlacedStroke {
  Placement placement;
  VectorStroke stroke;
};

// Strokes are kept in paint order.
struct VectorDoc {
  int width = 0;
  int height = 0;
  std::vector<PlacedStroke> strokes;
};

}  // namespace mangavec
