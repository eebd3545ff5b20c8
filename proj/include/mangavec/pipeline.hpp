#pragma once

// End-to-end vectorization: tile the target into an n x n patch grid,
// decompose every patch into strokes (greedy search or a replayed action
// file), prune each patch, assemble the document and measure it.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mangavec/action_file.hpp"
#include "mangavec/doc.hpp"
#include "mangavec/image.hpp"
#include "mangavec/metrics.hpp"
#include "mangavec/parallel.hpp"
#include "mangavec/png_io.hpp"
#include "mangavec/prune.hpp"
#include "mangavec/raster.hpp"
#include "mangavec/reward.hpp"
#include "mangavec/search.hpp"
#include "mangavec/vectorize.hpp"

namespace mangavec {

enum ExitCode : int { kExitOk = 0, kExitBadInput = 2, kExitInternal = 3 };

// A failure tagged with the pipeline stage it happened in.
class pipeline_error : public std::runtime_error {
 public:
  pipeline_error(std::string stage, const std::string& what, int exit_code)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), exit_code_(exit_code) {}

  const std::string& stage() const { return stage_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

// ---------------------------------------------------------------------------
// Tiling

struct PatchGrid {
  int n = 1;
  int patch_width = 0;
  int patch_height = 0;
  int image_width = 0;   // before padding
  int image_height = 0;
  int padded_width = 0;
  int padded_height = 0;
  std::vector<PixelBox> boxes;  // row-major over the grid

  std::size_t size() const { return boxes.size(); }
};

struct Tiling {
  PatchGrid grid;
  Canvas padded;
  std::vector<Canvas> patches;
};

// Pads with white on the right and bottom up to a multiple of n, then cuts
// n*n equal patches.
inline Tiling tile(const Canvas& image, int n) {
  if (n < 1) throw std::invalid_argument("tile: patches per side must be >= 1");
  if (n > std::min(image.width(), image.height()))
    throw std::invalid_argument("tile: " + std::to_string(n) + " patches per side exceeds image side " +
                                std::to_string(std::min(image.width(), image.height())));
  Tiling t;
  PatchGrid& g = t.grid;
  g.n = n;
  g.image_width = image.width();
  g.image_height = image.height();
  g.patch_width = (image.width() + n - 1) / n;
  g.patch_height = (image.height() + n - 1) / n;
  g.padded_width = g.patch_width * n;
  g.padded_height = g.patch_height * n;
  t.padded = blank_canvas(g.padded_width, g.padded_height);
  paste(t.padded, image, 0, 0);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col) {
      const PixelBox box{col * g.patch_width, row * g.patch_height, g.patch_width, g.patch_height};
      g.boxes.push_back(box);
      t.patches.push_back(crop(t.padded, box));
    }
  return t;
}

// Inverse of tile(): reassembles the padded image.
inline Canvas untile(const PatchGrid& grid, const std::vector<Canvas>& patches) {
  Canvas out = blank_canvas(grid.padded_width, grid.padded_height);
  for (std::size_t i = 0; i < grid.boxes.size() && i < patches.size(); ++i)
    paste(out, patches[i], grid.boxes[i].x, grid.boxes[i].y);
  return out;
}

inline PixelBox expand_box(const PixelBox& box, int overlap, int width, int height) {
  const int x0 = std::max(0, box.x - overlap);
  const int y0 = std::max(0, box.y - overlap);
  const int x1 = std::min(width, box.x1() + overlap);
  const int y1 = std::min(height, box.y1() + overlap);
  return {x0, y0, x1 - x0, y1 - y0};
}

// ---------------------------------------------------------------------------
// Run configuration and results

struct RunConfig {
  std::string input;
  std::string output;
  int patches_per_side = 16;
  int strokes = 20;
  int budget = 2000;
  int refine_iters = 5;
  double xi = 1e-3;
  std::uint64_t seed = 0;
  RewardWeights weights;
  RewardNorm reward_norm = RewardNorm::literal;
  bool accept_gate = true;
  bool prune = true;
  bool clip_patches = true;  // keep each stroke inside its own patch
  int overlap = 0;
  int threads = 0;  // 0 = hardware concurrency
  std::optional<std::string> actions_file;
  std::optional<std::string> metrics_out;
  std::optional<std::string> timings_out;
  std::optional<std::string> save_actions;
  // Processing order of patches; empty means natural order.  Output does
  // not depend on it.
  std::vector<int> patch_order;

  void validate() const {
    if (patches_per_side < 1) throw std::invalid_argument("--patches must be >= 1");
    if (strokes < 1) throw std::invalid_argument("--strokes must be >= 1");
    if (budget < 1) throw std::invalid_argument("--budget must be >= 1");
    if (refine_iters < 0) throw std::invalid_argument("refine iterations must be >= 0");
    if (!(xi >= 0)) throw std::invalid_argument("--xi must be >= 0");
    if (overlap < 0) throw std::invalid_argument("--overlap must be >= 0");
    weights.validate();
  }
};

struct PatchResult {
  PixelBox box;               // region decomposed, in padded-image pixels
  Decomposition decomposition;
  VectorDoc local;            // unpruned, patch-local
  VectorDoc pruned;           // patch-local
  PruneReport prune;
};

struct RunReport {
  PatchGrid grid;
  VectorDoc doc;           // final document
  VectorDoc unpruned_doc;
  std::vector<PatchResult> patches;
  int strokes_before = 0;
  int strokes_after = 0;
  std::size_t bytes_before = 0;
  std::size_t bytes_after = 0;
  int prune_removed = 0;
  int prune_error_removed = 0;
  int prune_neutral_removed = 0;
  double prune_delta_before = 0;  // pixel-weighted over patches
  double prune_delta_after = 0;
  int proposals = 0;
  int rejected = 0;
  double blank_mse = 0;
  double mse = 0;
  double ssim = 0;
  double mse_512 = 0;
  double ssim_512 = 0;
  std::vector<std::pair<std::string, double>> timings;  // stage -> seconds
};

inline ActionSequence collect_actions(const RunReport& report) {
  ActionSequence seq;
  for (std::size_t i = 0; i < report.patches.size(); ++i)
    for (const Action& a : report.patches[i].decomposition.actions)
      seq.push_back({static_cast<int>(i), a});
  return seq;
}

namespace detail {

class StageClock {
 public:
  explicit StageClock(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}
  template <typename Fn>
  decltype(auto) time(const std::string& stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      StageClock* self;
      const std::string& stage;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
        self->sink_.emplace_back(stage, d.count());
      }
    } record{this, stage, start};
    try {
      return fn();
    } catch (const pipeline_error&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw pipeline_error(stage, e.what(), kExitBadInput);
    } catch (const std::exception& e) {
      throw pipeline_error(stage, e.what(), kExitInternal);
    }
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
};

}  // namespace detail

// Vectorizes an in-memory target.  `replay`, when given, supplies the
// strokes per patch instead of the greedy search.
inline RunReport vectorize_image(const Canvas& target, const RunConfig& cfg,
                                 const ActionSequence* replay = nullptr) {
  RunReport report;
  detail::StageClock clock(report.timings);
  const auto total_start = std::chrono::steady_clock::now();

  clock.time("config", [&] { cfg.validate(); });

  const Tiling tiling = clock.time("tile", [&] {
    Tiling t = tile(target, cfg.patches_per_side);
    if (t.grid.patch_width < 8 || t.grid.patch_height < 8)
      throw std::invalid_argument("patches of " + std::to_string(t.grid.patch_width) + "x" +
                                  std::to_string(t.grid.patch_height) +
                                  " px are below the 8 px minimum; use fewer patches");
    return t;
  });
  report.grid = tiling.grid;
  const std::size_t npatch = tiling.grid.size();

  std::vector<std::vector<Action>> replay_by_patch;
  if (replay) {
    clock.time("actions", [&] {
      replay_by_patch.resize(npatch);
      for (const IndexedAction& rec : *replay) {
        if (rec.patch_index < 0 || static_cast<std::size_t>(rec.patch_index) >= npatch)
          throw std::invalid_argument("action for patch " + std::to_string(rec.patch_index) +
                                      " but the grid has " + std::to_string(npatch) + " patches");
        replay_by_patch[rec.patch_index].push_back(rec.action);
      }
    });
  }

  std::vector<int> order = cfg.patch_order;
  if (order.empty()) {
    order.resize(npatch);
    for (std::size_t i = 0; i < npatch; ++i) order[i] = static_cast<int>(i);
  } else if (order.size() != npatch) {
    throw pipeline_error("config", "patch order does not cover every patch", kExitBadInput);
  }
  const int workers = cfg.threads > 0 ? cfg.threads : default_worker_count();

  report.patches.resize(npatch);
  clock.time("decompose", [&] {
    parallel_for(npatch, workers, [&](std::size_t slot) {
      const std::size_t i = static_cast<std::size_t>(order[slot]);
      PatchResult& pr = report.patches[i];
      pr.box = expand_box(tiling.grid.boxes[i], cfg.overlap, tiling.grid.padded_width,
                          tiling.grid.padded_height);
      const Canvas patch = cfg.overlap == 0 ? tiling.patches[i] : crop(tiling.padded, pr.box);
      if (replay) {
        ReplayPolicy policy(replay_by_patch[i]);
        pr.decomposition = run_policy(policy, patch, {cfg.strokes, cfg.accept_gate, 0});
      } else {
        SearchConfig sc;
        sc.budget = cfg.budget;
        sc.refine_iters = cfg.refine_iters;
        sc.seed = cfg.seed ^ static_cast<std::uint64_t>(i);
        sc.accept_gate = cfg.accept_gate;
        sc.norm = cfg.reward_norm;
        pr.decomposition = decompose_patch(patch, cfg.strokes, sc, cfg.weights);
      }
    });
  });

  clock.time("vectorize", [&] {
    parallel_for(npatch, workers, [&](std::size_t i) {
      PatchResult& pr = report.patches[i];
      pr.local = {pr.box.width, pr.box.height, {}};
      const PixelBox local_box{0, 0, pr.box.width, pr.box.height};
      for (const Action& a : pr.decomposition.actions)
        pr.local.strokes.push_back({Placement{}, action_to_vector(a, local_box)});
    });
  });

  clock.time("prune", [&] {
    parallel_for(npatch, workers, [&](std::size_t slot) {
      const std::size_t i = static_cast<std::size_t>(order[slot]);
      PatchResult& pr = report.patches[i];
      if (!cfg.prune) {
        pr.pruned = pr.local;
        pr.prune.input_strokes = static_cast<int>(pr.local.strokes.size());
        return;
      }
      const Canvas patch = cfg.overlap == 0 ? tiling.patches[i] : crop(tiling.padded, pr.box);
      auto [doc, rep] = prune(pr.local, patch, {cfg.xi, pr.box.width, pr.box.height});
      pr.pruned = std::move(doc);
      pr.prune = std::move(rep);
    });
  });

  clock.time("assemble", [&] {
    report.doc = {target.width(), target.height(), {}};
    report.unpruned_doc = report.doc;
    double weight = 0;
    for (const PatchResult& pr : report.patches) {
      Placement place{static_cast<double>(pr.box.x), static_cast<double>(pr.box.y), 1.0};
      if (cfg.clip_patches) {
        place.clip_w = pr.box.width;
        place.clip_h = pr.box.height;
      }
      for (const PlacedStroke& s : pr.local.strokes) report.unpruned_doc.strokes.push_back({place, s.stroke});
      for (const PlacedStroke& s : pr.pruned.strokes) report.doc.strokes.push_back({place, s.stroke});
      report.proposals += pr.decomposition.proposals;
      report.rejected += pr.decomposition.rejected;
      report.prune_removed += pr.prune.removed;
      report.prune_error_removed += pr.prune.error_removed;
      report.prune_neutral_removed += pr.prune.neutral_removed;
      const double area = static_cast<double>(pr.box.width) * pr.box.height;
      report.prune_delta_before += pr.prune.delta_before * area;
      report.prune_delta_after += pr.prune.delta_after * area;
      weight += area;
    }
    if (weight > 0) {
      report.prune_delta_before /= weight;
      report.prune_delta_after /= weight;
    }
    report.strokes_before = static_cast<int>(report.unpruned_doc.strokes.size());
    report.strokes_after = static_cast<int>(report.doc.strokes.size());
    report.bytes_before = doc_size_bytes(report.unpruned_doc);
    report.bytes_after = doc_size_bytes(report.doc);
  });

  clock.time("metrics", [&] {
    const Gray255 target255 = to_255(target);
    const Canvas raster = rasterize_doc(report.doc, target.width(), target.height());
    report.mse = mse(to_255(raster), target255);
    report.ssim = ssim(to_255(raster), target255);
    report.blank_mse = mse(to_255(blank_canvas(target.width(), target.height())), target255);
    const Gray255 big_target = resize_nearest(target255, 512, 512);
    const Gray255 big = to_255(rasterize_doc(report.doc, 512, 512));
    report.mse_512 = mse(big, big_target);
    report.ssim_512 = ssim(big, big_target);
  });

  const std::chrono::duration<double> total = std::chrono::steady_clock::now() - total_start;
  report.timings.emplace_back("total", total.count());
  return report;
}

namespace detail {

inline void kv(std::string& out, const std::string& key, const std::string& value) {
  out += key;
  out += " = ";
  out += value;
  out += '\n';
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

// Deterministic key = value report; timings are kept out so identical runs
// produce identical files.
inline std::string format_metrics(const RunReport& r, const RunConfig& cfg) {
  using detail::kv;
  using detail::num;
  std::string out;
  kv(out, "input", cfg.input);
  kv(out, "width", std::to_string(r.grid.image_width));
  kv(out, "height", std::to_string(r.grid.image_height));
  kv(out, "patches_per_side", std::to_string(cfg.patches_per_side));
  kv(out, "patches", std::to_string(r.grid.size()));
  kv(out, "patch_width", std::to_string(r.grid.patch_width));
  kv(out, "patch_height", std::to_string(r.grid.patch_height));
  kv(out, "max_strokes", std::to_string(cfg.strokes));
  kv(out, "budget", std::to_string(cfg.budget));
  kv(out, "seed", std::to_string(cfg.seed));
  kv(out, "reward_norm", std::string(to_string(cfg.reward_norm)));
  kv(out, "lambda1", num(cfg.weights.lambda1));
  kv(out, "lambda2", num(cfg.weights.lambda2));
  kv(out, "lambda3", num(cfg.weights.lambda3));
  kv(out, "lambda4", num(cfg.weights.lambda4));
  kv(out, "source", cfg.actions_file ? "actions_file" : "greedy");
  kv(out, "proposals", std::to_string(r.proposals));
  kv(out, "rejected", std::to_string(r.rejected));
  kv(out, "strokes_before_prune", std::to_string(r.strokes_before));
  kv(out, "strokes_after_prune", std::to_string(r.strokes_after));
  kv(out, "bytes_before_prune", std::to_string(r.bytes_before));
  kv(out, "bytes_after_prune", std::to_string(r.bytes_after));
  kv(out, "clip_patches", cfg.clip_patches ? "true" : "false");
  kv(out, "prune_enabled", cfg.prune ? "true" : "false");
  kv(out, "prune_xi", num(cfg.xi));
  kv(out, "prune_removed", std::to_string(r.prune_removed));
  kv(out, "prune_error_strokes_removed", std::to_string(r.prune_error_removed));
  kv(out, "prune_neutral_strokes_removed", std::to_string(r.prune_neutral_removed));
  kv(out, "prune_delta_before", num(r.prune_delta_before));
  kv(out, "prune_delta_after", num(r.prune_delta_after));
  kv(out, "blank_mse", num(r.blank_mse));
  kv(out, "mse", num(r.mse));
  kv(out, "ssim", num(r.ssim));
  kv(out, "mse_512", num(r.mse_512));
  kv(out, "ssim_512", num(r.ssim_512));
  return out;
}

inline std::string format_timings(const RunReport& r) {
  std::string out;
  for (const auto& [stage, seconds] : r.timings) detail::kv(out, "time_" + stage, detail::num(seconds));
  return out;
}

// File-level run: reads the PNG, vectorizes, writes the SVG and reports.
// Nothing is written unless every stage succeeds.
inline RunReport run(const RunConfig& cfg) {
  std::vector<std::pair<std::string, double>> io_timings;
  detail::StageClock clock(io_timings);

  const Canvas target = clock.time("load", [&] {
    try {
      return load_target(cfg.input);
    } catch (const png_error& e) {
      throw std::invalid_argument(e.what());
    }
  });

  std::optional<ActionSequence> replay;
  if (cfg.actions_file) {
    replay = clock.time("actions", [&] {
      try {
        return load_actions(*cfg.actions_file);
      } catch (const action_file_error& e) {
        throw std::invalid_argument(e.what());
      }
    });
  }

  RunReport report = vectorize_image(target, cfg, replay ? &*replay : nullptr);

  const std::string svg = serialize_svg(report.doc);
  const std::string metrics = format_metrics(report, cfg);
  clock.time("write", [&] {
    std::vector<std::string> written;
    try {
      write_text_atomically(cfg.output, svg);
      written.push_back(cfg.output);
      if (cfg.metrics_out) {
        write_text_atomically(*cfg.metrics_out, metrics);
        written.push_back(*cfg.metrics_out);
      }
      if (cfg.save_actions) {
        write_text_atomically(*cfg.save_actions, format_actions(collect_actions(report)));
        written.push_back(*cfg.save_actions);
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) std::filesystem::remove(p, ec);
      throw;
    }
  });

  report.timings.insert(report.timings.begin(), io_timings.begin(), io_timings.end() - 1);
  report.timings.insert(report.timings.end() - 1, io_timings.back());
  if (cfg.timings_out) {
    clock.time("write", [&] { write_text_atomically(*cfg.timings_out, format_timings(report)); });
  }
  return report;
}

}  // namespace mangavec
