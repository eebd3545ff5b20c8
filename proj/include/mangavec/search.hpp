#pragma once

// Greedy stroke search.  Each step proposes the single stroke that
// maximizes the stroke-accurateness reward for the current (canvas,
// target) state; nothing about earlier or later strokes is consulted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "mangavec/image.hpp"
#include "mangavec/raster.hpp"
#include "mangavec/reward.hpp"

namespace mangavec {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// xoshiro256** seeded through splitmix64.  Kept local so sequences do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) {
      s = splitmix64(s);
      w = s;
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

struct SearchConfig {
  int budget = 2000;       // candidate evaluations per stroke (before refinement)
  int refine_iters = 5;    // coordinate-descent rounds, step halves each round
  double refine_step = 0.1;
  std::uint64_t seed = 0;
  bool accept_gate = true;
  RewardNorm norm = RewardNorm::literal;
  // Evaluated first and counted against the budget.
  std::vector<Action> hints;
};

struct Proposal {
  Action action;
  SAReward reward;
  double delta_sse = 0;   // change of ||c - M||^2 if the stroke is applied
  bool feasible = false;  // non-empty, and improves the error when gated
};

namespace detail {

struct Evaluated {
  Action action;
  CandidateScorer::Score score;
  bool feasible = false;
};

inline bool better(const Evaluated& a, const Evaluated& b) {
  if (a.feasible != b.feasible) return a.feasible;
  return a.score.reward.total > b.score.reward.total;
}

// Pixel with the largest |c - M|.  Flat regions tie everywhere, so ties go
// to the pixel with the most residual in its neighbourhood (a box of side
// ~1/4 of the patch), then to raster order.  This puts seeds inside blobs
// rather than on their top edge.
inline std::pair<int, int> max_residual_pixel(const Canvas& canvas, const Canvas& target) {
  const int w = target.width(), h = target.height();
  std::vector<double> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  auto at = [&](int x, int y) -> double& { return sat[static_cast<std::size_t>(y) * (w + 1) + x]; };
  double best = -1;
  for (int y = 0; y < h; ++y) {
    double run = 0;
    for (int x = 0; x < w; ++x) {
      const double d = std::abs(canvas(x, y) - target(x, y));
      best = std::max(best, d);
      run += d;
      at(x + 1, y + 1) = at(x + 1, y) + run;
    }
  }
  const int half = std::max(1, std::min(w, h) / 8);
  double best_mass = -1;
  int bx = 0, by = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (std::abs(canvas(x, y) - target(x, y)) < best) continue;
      const int x0 = std::max(0, x - half), x1 = std::min(w, x + half + 1);
      const int y0 = std::max(0, y - half), y1 = std::min(h, y + half + 1);
      const double mass = at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
      if (mass > best_mass) {
        best_mass = mass;
        bx = x;
        by = y;
      }
    }
  }
  return {bx, by};
}

inline Action seed_action(Rng& rng, double cx, double cy, double gray) {
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double half = rng.uniform(0.0, 0.3);
  const double bend = rng.uniform(-0.5, 0.5) * half;
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  const Vec2 perp{-dir.y, dir.x};
  const Vec2 c{cx, cy};
  const Vec2 a = c - dir * half;
  const Vec2 b = c + dir * half;
  const Vec2 m = c + perp * bend;
  const double r0 = rng.uniform(0.0, 0.6);
  const double r2 = std::clamp(r0 + rng.uniform(-0.2, 0.2), 0.0, 1.0);
  return Action{a.x, a.y, m.x, m.y, b.x, b.y, r0, r2, gray}.clamped();
}

inline Action uniform_action(Rng& rng) {
  std::array<double, Action::kSize> a{};
  for (double& v : a) v = rng.uniform();
  return Action::from_array(a);
}

}  // namespace detail

// Proposes the next stroke for state (c_t, target).  Reads nothing but its
// arguments.
inline Proposal greedy_propose(const Canvas& c_t, const Canvas& target, const SearchConfig& cfg,
                               const RewardWeights& w) {
  require_same_shape(c_t, target, "greedy_propose");
  const int budget = std::max(cfg.budget, 1);
  const CandidateScorer scorer(c_t, target, w, cfg.norm);
  StrokeRenderer renderer(target.width(), target.height());
  Rng rng(cfg.seed);

  auto evaluate = [&](Action a) {
    a = a.clamped();
    a.g = quantize_gray(a.g);
    const PixelBox box = renderer.render(a);
    detail::Evaluated e{a, scorer.score(renderer.mask(), box, a.g), false};
    e.feasible = !e.score.reward.degenerate && (!cfg.accept_gate || e.score.delta_sse < 0);
    return e;
  };

  std::optional<detail::Evaluated> best;
  std::optional<Action> first_seed;
  auto consider = [&](const detail::Evaluated& e) {
    if (!best || detail::better(e, *best)) best = e;
  };

  int used = 0;
  for (const Action& h : cfg.hints) {
    if (used >= budget) break;
    consider(evaluate(h));
    ++used;
  }

  const int remaining = budget - used;
  if (remaining > 0) {
    const auto [px, py] = detail::max_residual_pixel(c_t, target);
    const double cx = (px + 0.5) / target.width();
    const double cy = (py + 0.5) / target.height();
    const double gray = quantize_gray(target(px, py));
    const int seeds = std::max(1, remaining / 4);
    for (int i = 0; i < seeds; ++i) {
      const Action a = detail::seed_action(rng, cx, cy, gray);
      if (!first_seed) first_seed = a;
      consider(evaluate(a));
    }
    for (int i = seeds; i < remaining; ++i) consider(evaluate(detail::uniform_action(rng)));
  }

  // Coordinate-wise local refinement around the incumbent.
  double step = cfg.refine_step;
  for (int round = 0; round < cfg.refine_iters; ++round, step *= 0.5) {
    for (std::size_t j = 0; j < Action::kSize; ++j) {
      const double delta = j == Action::kSize - 1 ? std::max(step, GrayLevels::kStep) : step;
      for (const double sign : {1.0, -1.0}) {
        auto coords = best->action.to_array();
        coords[j] += sign * delta;
        const detail::Evaluated e = evaluate(Action::from_array(coords));
        if (detail::better(e, *best)) best = e;
      }
    }
  }

  if (best->score.reward.degenerate && first_seed) {
    Action a = *first_seed;
    a.g = quantize_gray(a.g);
    return {a, {}, 0, false};
  }
  return {best->action, best->score.reward, best->score.delta_sse, best->feasible};
}

// Behavioural interface of a stroke policy.  nullopt means the policy has
// nothing more to offer.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::optional<Action> propose(const Canvas& canvas, const Canvas& target) = 0;
};

// Greedy search as a policy.  The n-th call uses seed splitmix64(seed + n),
// so a fresh policy with the same seed replays the same proposals.
class GreedyPolicy final : public Policy {
 public:
  GreedyPolicy(SearchConfig cfg, RewardWeights w) : cfg_(std::move(cfg)), w_(w) {}

  std::optional<Action> propose(const Canvas& canvas, const Canvas& target) override {
    SearchConfig step = cfg_;
    step.seed = splitmix64(cfg_.seed + calls_++);
    return greedy_propose(canvas, target, step, w_).action;
  }

 private:
  SearchConfig cfg_;
  RewardWeights w_;
  std::uint64_t calls_ = 0;
};

// Replays a fixed list of actions in order.
class ReplayPolicy final : public Policy {
 public:
  explicit ReplayPolicy(std::vector<Action> actions) : actions_(std::move(actions)) {}

  std::optional<Action> propose(const Canvas&, const Canvas&) override {
    if (next_ >= actions_.size()) return std::nullopt;
    return actions_[next_++];
  }

 private:
  std::vector<Action> actions_;
  std::size_t next_ = 0;
};

struct Decomposition {
  std::vector<Action> actions;     // accepted strokes in paint order
  std::vector<double> sse_trace;   // ||c - M||^2 after each accepted stroke
  double initial_sse = 0;
  int proposals = 0;
  int rejected = 0;
};

struct DecomposeOptions {
  int max_strokes = 40;
  bool accept_gate = true;
  int max_consecutive_rejections = 5;  // <= 0 disables the early stop
};

// Runs a policy from a blank canvas.  With the gate on, a proposal is kept
// only if it strictly lowers ||c - M||^2.
inline Decomposition run_policy(Policy& policy, const Canvas& target, const DecomposeOptions& opt) {
  Decomposition out;
  Canvas canvas = blank_canvas(target.width(), target.height());
  double sse = squared_error(canvas, target);
  out.initial_sse = sse;
  int streak = 0;
  StrokeRenderer renderer(target.width(), target.height());
  while (static_cast<int>(out.actions.size()) < opt.max_strokes) {
    if (opt.accept_gate && sse == 0.0) break;
    const std::optional<Action> proposed = policy.propose(canvas, target);
    if (!proposed) break;
    ++out.proposals;
    Action a = proposed->clamped();
    a.g = quantize_gray(a.g);
    renderer.render(a);
    Canvas next = canvas;
    composite_into(next, renderer.mask(), a.g);
    const double next_sse = squared_error(next, target);
    if (opt.accept_gate && !(next_sse < sse)) {
      ++out.rejected;
      if (opt.max_consecutive_rejections > 0 && ++streak >= opt.max_consecutive_rejections) break;
      continue;
    }
    streak = 0;
    canvas = std::move(next);
    sse = next_sse;
    out.actions.push_back(a);
    out.sse_trace.push_back(sse);
  }
  return out;
}

inline Decomposition decompose_patch(const Canvas& target, int max_strokes, const SearchConfig& cfg,
                                     const RewardWeights& w) {
  if (max_strokes < 1) throw std::invalid_argument("decompose_patch: max_strokes must be >= 1");
  GreedyPolicy policy(cfg, w);
  return run_policy(policy, target, {max_strokes, cfg.accept_gate, 5});
}

}  // namespace mangavec
