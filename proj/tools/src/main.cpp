#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "spi/bundle.hpp"
#include "spi/capture.hpp"
#include "spi/error.hpp"
#include "spi/image_io.hpp"
#include "spi/phantom.hpp"
#include "spi/version.hpp"
#include "spi_tools/experiment.hpp"

namespace fs = std::filesystem;
using namespace spi;
using namespace spi::tools;

namespace {

struct RunOptions {
  std::string config;
  std::vector<std::string> images;
  std::string boxes;
  std::vector<std::string> methods{"original", "defocus", "ours-passthrough", "ours-oracle"};
  std::string sweep_k;
  std::string sweep_rate;
  std::optional<double> rate;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string scale = "desk";
  bool strict = false;
  bool snapshots = false;
};

int run(const RunOptions& o) {
  ExperimentSpec spec;
  try {
    spec.config = o.scale == "paper" ? paper_scale() : desk_scale();
    if (!o.config.empty()) spec.config = load_config(o.config, spec.config);
    if (o.rate) spec.config.sampling_rate = *o.rate;
    if (o.seed) spec.config.seed = *o.seed;
    for (const auto& p : o.images) spec.images.emplace_back(p);
    if (!o.boxes.empty()) spec.boxes = fs::path(o.boxes);
    for (const auto& m : o.methods) spec.methods.push_back(parse_method(m));
    if (!o.sweep_k.empty() && !o.sweep_rate.empty())
      fail(ErrorKind::Config, "--sweep-k and --sweep-rate are exclusive");
    if (!o.sweep_k.empty()) {
      spec.sweep = SweepAxis::FeedbackBase;
      spec.sweep_values = parse_number_list(o.sweep_k);
    } else if (!o.sweep_rate.empty()) {
      spec.sweep = SweepAxis::SamplingRate;
      spec.sweep_values = parse_number_list(o.sweep_rate);
    }
    spec.out = o.out;
    spec.strict = o.strict;
    spec.snapshots = o.snapshots;
  } catch (const Error& e) {
    std::cerr << "spi: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  const auto result = run_experiment(spec);
  if (result.exit_code != kExitOk) {
    std::cerr << "spi: " << result.message << "\n";
    return result.exit_code;
  }
  for (const auto& c : result.cells) {
    std::cout << c.image << ' ' << c.sweep << ' ' << c.row.method << " psnr_out=" << c.row.psnr_outside_db
              << " mse_in=" << c.row.mse_inside;
    if (c.acquisitions) std::cout << " n_feedbacks=" << c.n_feedbacks;
    std::cout << "\n";
  }
  std::cout << "report: " << (fs::path(o.out) / "report.csv").string() << "\n";
  return kExitOk;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "spi: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "spi: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-pixel capture simulator with pre-capture masking"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Capture, attack and evaluate images");
  run_cmd->add_option("--config", ro.config, "key = value configuration file");
  run_cmd->add_option("--image", ro.images, "Input PGM/PPM (repeatable)")->required();
  run_cmd->add_option("--boxes", ro.boxes, "Box file for every image (default: <image>.boxes)");
  run_cmd->add_option("--methods", ro.methods, "original, defocus, ours-passthrough, ours-oracle, ours-silhouette")
      ->delimiter(',')
      ->capture_default_str();
  run_cmd->add_option("--sweep-k", ro.sweep_k, "Comma-separated feedback bases");
  run_cmd->add_option("--sweep-rate", ro.sweep_rate, "Comma-separated sampling rates");
  run_cmd->add_option("--rate", ro.rate, "Sampling rate");
  run_cmd->add_option("--seed", ro.seed, "Master seed");
  run_cmd->add_option("--out", ro.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--scale", ro.scale, "Base configuration")
      ->check(CLI::IsMember({"desk", "paper"}))
      ->capture_default_str();
  run_cmd->add_flag("--strict", ro.strict, "Exit 4 when a final reconstruction does not converge");
  run_cmd->add_flag("--snapshots", ro.snapshots, "Write provisional reconstructions and weights");

  std::string bundle_path, out_path, image_path;
  std::optional<double> lambda;
  std::optional<std::size_t> iterations;
  auto* attack_cmd = app.add_subcommand("attack", "Reconstruct from a bundle alone");
  attack_cmd->add_option("--bundle", bundle_path, "Measurement bundle")->required();
  attack_cmd->add_option("--out", out_path, "Output image")->required();
  attack_cmd->add_option("--lambda", lambda, "TV weight (default: bundle config)");
  attack_cmd->add_option("--iterations", iterations, "Maximum ADMM iterations");

  auto* verify_cmd = app.add_subcommand("verify", "Regenerate patterns and check recorded measurements");
  verify_cmd->add_option("--bundle", bundle_path, "Measurement bundle")->required();
  verify_cmd->add_option("--image", image_path, "Source image")->required();

  std::size_t count = 10, size = 64;
  std::uint64_t seed = 1;
  bool rgb = false;
  auto* phantom_cmd = app.add_subcommand("phantom", "Write seeded test scenes with box files");
  phantom_cmd->add_option("--out", out_path, "Output directory")->required();
  phantom_cmd->add_option("--count", count, "Number of scenes")->capture_default_str();
  phantom_cmd->add_option("--size", size, "Side length")->capture_default_str();
  phantom_cmd->add_option("--seed", seed, "First seed")->capture_default_str();
  phantom_cmd->add_flag("--rgb", rgb, "Three-channel scenes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run_cmd) return run(ro);

  if (*attack_cmd)
    return guarded([&] {
      const auto bundle = load_bundle(bundle_path);
      AdmmTvParams params = bundle.config.solver;
      if (lambda) params.lambda = *lambda;
      if (iterations) params.max_iterations = *iterations;
      const auto r = replay_attack_result(bundle, params);
      save_image(r.estimate, out_path);
      std::cout << "iterations=" << r.iterations << " converged=" << r.converged << "\n";
      return kExitOk;
    });

  if (*verify_cmd)
    return guarded([&] {
      const auto bundle = load_bundle(bundle_path);
      const Image x = load_image(image_path, bundle.config.channel_mode);
      const auto report = verify_replay(bundle, x);
      const bool ok = report.schedule_matches && report.max_deviation <= 1e-12;
      std::cout << (ok ? "OK" : "MISMATCH") << " records=" << report.records_checked
                << " max_deviation=" << report.max_deviation
                << " schedule=" << (report.schedule_matches ? "match" : "differs") << "\n";
      return ok ? kExitOk : kExitFailure;
    });

  return guarded([&] {
    fs::create_directories(out_path);
    for (std::size_t k = 0; k < count; ++k) {
      const Scene scene = make_phantom(size, seed + k, rgb ? 3 : 1);
      const std::string stem = "phantom_" + std::to_string(seed + k);
      save_image(scene.image, fs::path(out_path) / (stem + (rgb ? ".ppm" : ".pgm")));
      std::ofstream boxes(fs::path(out_path) / (stem + ".boxes"));
      write_boxes(boxes, scene.boxes);
      if (!boxes) fail(ErrorKind::Io, "cannot write boxes for " + stem);
    }
    return kExitOk;
  });
}
