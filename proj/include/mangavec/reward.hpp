#pragma once

// Stroke rewards: the plain L2 improvement and the stroke-accurateness
// reward built from coverage (r1), target uniformity under the stroke (r2),
// canvas change (r3) and fidelity (r4).

#include <array>
#include <algorithm>
#include <bit>
#include <bitset>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mangavec/image.hpp"
#include "mangavec/raster.hpp"

namespace mangavec {

struct RewardWeights {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
  double lambda4 = 1.0;

  void validate() const {
    if (!(lambda1 >= 0 && lambda2 >= 0 && lambda3 >= 0 && lambda4 >= 0))
      throw std::invalid_argument("reward weights must be non-negative");
  }
};

// The eleven admissible stroke grays {0, 0.1, ..., 1}.
struct GrayLevels {
  static constexpr int kCount = 11;
  static constexpr double kStep = 0.1;

  static constexpr double value(int level) { return level / 10.0; }

  // Nearest level, ties rounding up.  The small bias keeps decimal ties
  // such as 0.15 (stored as 0.1499...) on the upper side.
  static int level_of(double g) {
    if (!(g > 0)) return 0;
    if (g >= 1) return kCount - 1;
    const int l = static_cast<int>(std::floor(g * 10.0 + 0.5 + 1e-9));
    return std::min(l, kCount - 1);
  }
};

inline double quantize_gray(double g) { return GrayLevels::value(GrayLevels::level_of(g)); }

// How r3 and r4 are normalized: by the whole raster (C*H*W) or by the
// stroke's own area.
enum class RewardNorm { literal, mask };

inline std::string_view to_string(RewardNorm n) { return n == RewardNorm::mask ? "mask" : "literal"; }

inline RewardNorm parse_reward_norm(std::string_view s) {
  if (s == "literal") return RewardNorm::literal;
  if (s == "mask") return RewardNorm::mask;
  throw std::invalid_argument("unknown reward normalization '" + std::string(s) + "'");
}

inline double l2_reward(const Canvas& c_t, const Canvas& c_next, const Canvas& target) {
  require_same_shape(c_t, target, "l2_reward");
  require_same_shape(c_next, target, "l2_reward");
  const double n = static_cast<double>(target.size());
  return (squared_error(c_t, target) - squared_error(c_next, target)) / n;
}

struct SAReward {
  double total = 0;
  double r1 = 0, r2 = 0, r3 = 0, r4 = 0;
  bool degenerate = false;  // empty mask
};

inline SAReward combine(double r1, double r2, double r3, double r4, const RewardWeights& w) {
  return {w.lambda1 * r1 + w.lambda2 * r2 + w.lambda3 * r3 + w.lambda4 * r4, r1, r2, r3, r4, false};
}

inline SAReward sa_reward(const StrokeRaster& stroke, const Canvas& c_t, const Canvas& c_next,
                          const Canvas& target, const RewardWeights& w,
                          RewardNorm norm = RewardNorm::literal) {
  require_same_shape(stroke.mask, target, "sa_reward");
  require_same_shape(c_t, target, "sa_reward");
  require_same_shape(c_next, target, "sa_reward");

  auto m = stroke.mask.pixels();
  auto ct = c_t.pixels();
  auto cn = c_next.pixels();
  auto tg = target.pixels();

  std::size_t area = 0;
  std::bitset<GrayLevels::kCount> seen;
  double change = 0, residual = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    ++area;
    seen.set(GrayLevels::level_of(tg[i]));
    const double dc = ct[i] - cn[i];
    const double dr = cn[i] - tg[i];
    change += dc * dc;
    residual += dr * dr;
  }
  if (area == 0) return {0, 0, 0, 0, 0, true};

  const double n = static_cast<double>(m.size());
  const double denom = norm == RewardNorm::mask ? static_cast<double>(area) : n;
  const double r1 = static_cast<double>(area) / n;
  const double r2 = 1.0 - static_cast<double>(seen.count()) / GrayLevels::kCount;
  return combine(r1, r2, change / denom, 1.0 - residual / denom, w);
}

// Scores candidate strokes against a fixed (canvas, target) state without
// materializing the next canvas.  c_next is implied by replace compositing.
class CandidateScorer {
 public:
  struct Score {
    SAReward reward;
    double delta_sse = 0;  // ||c_next - M||^2 - ||c_t - M||^2
  };

  CandidateScorer(const Canvas& canvas, const Canvas& target, RewardWeights w, RewardNorm norm)
      : canvas_(canvas), target_(target), levels_(target.width(), target.height()), w_(w),
        norm_(norm) {
    require_same_shape(canvas, target, "CandidateScorer");
    auto tg = target.pixels();
    auto lv = levels_.pixels();
    for (std::size_t i = 0; i < tg.size(); ++i)
      lv[i] = static_cast<std::uint8_t>(GrayLevels::level_of(tg[i]));
  }

  Score score(const Mask& mask, const PixelBox& box, double gray) const {
    if (box.empty()) return {{0, 0, 0, 0, 0, true}, 0};
    std::size_t area = 0;
    unsigned seen = 0;
    double change = 0, residual = 0, before = 0;
    for (int y = box.y; y < box.y1(); ++y) {
      const auto mrow = mask.row(y);
      const auto crow = canvas_.row(y);
      const auto trow = target_.row(y);
      const auto lrow = levels_.row(y);
      for (int x = box.x; x < box.x1(); ++x) {
        if (!mrow[x]) continue;
        ++area;
        seen |= 1u << lrow[x];
        const double dc = crow[x] - gray;
        const double dr = gray - trow[x];
        const double db = crow[x] - trow[x];
        change += dc * dc;
        residual += dr * dr;
        before += db * db;
      }
    }
    if (area == 0) return {{0, 0, 0, 0, 0, true}, 0};
    const double n = static_cast<double>(target_.size());
    const double denom = norm_ == RewardNorm::mask ? static_cast<double>(area) : n;
    const double r1 = static_cast<double>(area) / n;
    const double r2 = 1.0 - static_cast<double>(std::popcount(seen)) / GrayLevels::kCount;
    return {combine(r1, r2, change / denom, 1.0 - residual / denom, w_), residual - before};
  }

 private:
  const Canvas& canvas_;
  const Canvas& target_;
  Mask levels_;
  RewardWeights w_;
  RewardNorm norm_;
};

}  // namespace mangavec
