#pragma once

// Reverse-order stroke pruning.  Strokes are tested once each from last to
// first; a stroke is dropped when the document's raster error without it
// stays within delta + xi, and delta then moves to the new error.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mangavec/doc.hpp"
#include "mangavec/image.hpp"
#include "mangavec/raster.hpp"
#include "mangavec/vectorize.hpp"

namespace mangavec {

struct PruneConfig {
  double xi = 1e-3;
  int width = 0;   // raster size used for I(V); must match the target
  int height = 0;
};

struct PruneReport {
  int input_strokes = 0;
  int removed = 0;
  int error_removed = 0;    // removal lowered the error
  int neutral_removed = 0;  // removal kept the error within tolerance
  double delta_before = 0;
  double delta_after = 0;
  std::size_t bytes_before = 0;
  std::size_t bytes_after = 0;
  std::vector<int> test_order;  // stroke indices in the order they were tested
  std::vector<int> kept;        // surviving input indices, ascending
};

namespace detail {

struct Coverage {
  std::vector<std::uint32_t> pixels;
  double gray = 0;
};

// Per-pixel normalized squared error of the kept strokes against target.
inline double masked_render_error(const std::vector<Coverage>& strokes, const std::vector<char>& keep,
                                  const Canvas& target, Canvas& scratch) {
  scratch.fill(kWhite);
  auto px = scratch.pixels();
  for (std::size_t i = 0; i < strokes.size(); ++i) {
    if (!keep[i]) continue;
    for (std::uint32_t p : strokes[i].pixels) px[p] = strokes[i].gray;
  }
  return squared_error(scratch, target) / static_cast<double>(target.size());
}

}  // namespace detail

inline std::pair<VectorDoc, PruneReport> prune(const VectorDoc& doc, const Canvas& target,
                                              const PruneConfig& cfg) {
  if (cfg.xi < 0) throw std::invalid_argument("prune: xi must be non-negative");
  if (target.width() != cfg.width || target.height() != cfg.height)
    throw shape_error("prune: target size does not match the configured raster size");

  const std::size_t n = doc.strokes.size();
  PruneReport report;
  report.input_strokes = static_cast<int>(n);
  report.bytes_before = doc_size_bytes(doc);

  // Each stroke's coverage is fixed, so rasterize it once.
  std::vector<detail::Coverage> cover(n);
  {
    Mask mask(cfg.width, cfg.height, 0);
    const double sx = doc.width > 0 ? static_cast<double>(cfg.width) / doc.width : 1.0;
    const double sy = doc.height > 0 ? static_cast<double>(cfg.height) / doc.height : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const PlacedStroke& ps = doc.strokes[i];
      const PixelBox box = rasterize_stroke_into(mask, ps.stroke, ps.placement, sx, sy);
      cover[i].gray = ps.stroke.gray;
      for (int y = box.y; y < box.y1(); ++y)
        for (int x = box.x; x < box.x1(); ++x)
          if (mask(x, y)) {
            cover[i].pixels.push_back(static_cast<std::uint32_t>(y) * cfg.width + x);
            mask(x, y) = 0;
          }
    }
  }

  Canvas scratch(cfg.width, cfg.height);
  std::vector<char> keep(n, 1);
  double delta = detail::masked_render_error(cover, keep, target, scratch);
  report.delta_before = delta;

  for (std::size_t t = n; t-- > 0;) {
    report.test_order.push_back(static_cast<int>(t));
    keep[t] = 0;
    const double trial = detail::masked_render_error(cover, keep, target, scratch);
    if (trial <= delta + cfg.xi) {
      if (trial < delta) ++report.error_removed;
      else ++report.neutral_removed;
      ++report.removed;
      delta = trial;
    } else {
      keep[t] = 1;
    }
  }
  report.delta_after = delta;

  VectorDoc out{doc.width, doc.height, {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    out.strokes.push_back(doc.strokes[i]);
    report.kept.push_back(static_cast<int>(i));
  }
  report.bytes_after = doc_size_bytes(out);
  return {std::move(out), std::move(report)};
}

}  // namespace mangavec
