// mangavec: raster manga to stroke-based SVG.
//
//   mangavec vectorize --input page.png --output page.svg [options]

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "mangavec/mangavec.hpp"

namespace {

int run_vectorize(const mangavec::RunConfig& cfg, bool quiet) {
  try {
    const mangavec::RunReport report = mangavec::run(cfg);
    if (!quiet) {
      std::cerr << "strokes " << report.strokes_before << " -> " << report.strokes_after
                << ", bytes " << report.bytes_before << " -> " << report.bytes_after
                << ", mse " << report.mse << ", ssim " << report.ssim << '\n';
      std::cerr << mangavec::format_timings(report);
    }
    return mangavec::kExitOk;
  } catch (const mangavec::pipeline_error& e) {
    std::cerr << "mangavec: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "mangavec: internal: " << e.what() << '\n';
    return mangavec::kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vectorize raster manga into quadratic-Bezier stroke SVG"};
  app.set_config("--config", "", "Read options from a TOML/INI config file");
  app.require_subcommand(1);

  mangavec::RunConfig cfg;
  std::string norm = "literal";
  std::string actions_file, metrics_out, timings_out, save_actions;
  bool no_prune = false;
  bool no_clip = false;
  bool no_gate = false;
  bool quiet = false;

  auto* vec = app.add_subcommand("vectorize", "Vectorize a grayscale PNG into an SVG");
  vec->add_option("--input", cfg.input, "Input PNG")->required();
  vec->add_option("--output", cfg.output, "Output SVG")->required();
  vec->add_option("--patches", cfg.patches_per_side, "Patches per side (grid is N x N)")
      ->capture_default_str();
  vec->add_option("--strokes", cfg.strokes, "Maximum strokes per patch")->capture_default_str();
  vec->add_option("--budget", cfg.budget, "Candidate evaluations per stroke")->capture_default_str();
  vec->add_option("--refine-iters", cfg.refine_iters, "Local refinement rounds per stroke")
      ->capture_default_str();
  vec->add_option("--xi", cfg.xi, "Pruning tolerance per removed stroke")->capture_default_str();
  vec->add_option("--seed", cfg.seed, "Global seed")->capture_default_str();
  vec->add_option("--actions-file", actions_file, "Replay strokes from an action file");
  vec->add_option("--metrics-out", metrics_out, "Write key = value metrics here");
  vec->add_option("--timings-out", timings_out, "Write per-stage wall-clock timings here");
  vec->add_option("--save-actions", save_actions, "Write the accepted strokes as an action file");
  vec->add_option("--reward-norm", norm, "Normalization of r3/r4")
      ->check(CLI::IsMember({"literal", "mask"}))
      ->capture_default_str();
  vec->add_option("--lambda1", cfg.weights.lambda1, "Coverage weight")->capture_default_str();
  vec->add_option("--lambda2", cfg.weights.lambda2, "Uniformity weight")->capture_default_str();
  vec->add_option("--lambda3", cfg.weights.lambda3, "Change weight")->capture_default_str();
  vec->add_option("--lambda4", cfg.weights.lambda4, "Fidelity weight")->capture_default_str();
  vec->add_option("--overlap", cfg.overlap, "Patch overlap in pixels")->capture_default_str();
  vec->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  vec->add_flag("--no-prune", no_prune, "Skip stroke pruning");
  vec->add_flag("--no-clip", no_clip, "Let strokes spill over their patch edges");
  vec->add_flag("--no-accept-gate", no_gate, "Keep strokes even if they do not lower the error");
  vec->add_flag("--quiet", quiet, "Do not print a summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mangavec::kExitBadInput;
  }

  cfg.reward_norm = mangavec::parse_reward_norm(norm);
  cfg.prune = !no_prune;
  cfg.clip_patches = !no_clip;
  cfg.accept_gate = !no_gate;
  if (!actions_file.empty()) cfg.actions_file = actions_file;
  if (!metrics_out.empty()) cfg.metrics_out = metrics_out;
  if (!timings_out.empty()) cfg.timings_out = timings_out;
  if (!save_actions.empty()) cfg.save_actions = save_actions;
  return run_vectorize(cfg, quiet);
}
