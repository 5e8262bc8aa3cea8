#include "spi/capture.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "spi/block_system.hpp"
#include "spi/error.hpp"
#include "spi/rng.hpp"
#include "spi/schedule.hpp"

namespace spi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_scene(const Image& x, const CaptureConfig& config) {
  x.validate();
  if (x.side() != config.image_size)
    fail(ErrorKind::Dimension, "image is " + std::to_string(x.side()) + "x" +
                                   std::to_string(x.side()) + " but image_size is " +
                                   std::to_string(config.image_size));
  if (x.channels() != config.channels())
    fail(ErrorKind::Dimension, "image has " + std::to_string(x.channels()) + " channels but " +
                                   std::string(to_string(config.channel_mode)) + " mode needs " +
                                   std::to_string(config.channels()));
}

void add_noise(std::vector<double>& y, const CaptureConfig& config, std::size_t i) {
  if (config.noise_std <= 0.0) return;
  const std::size_t channels = config.channels();
  for (std::size_t j = 0; j < config.block_count(); ++j) {
    const auto noise = draw_normal({config.seed, static_cast<std::uint32_t>(i),
                                    static_cast<std::uint32_t>(j), Purpose::Noise},
                                   channels);
    for (std::size_t c = 0; c < channels; ++c) y[j * channels + c] += config.noise_std * noise[c];
  }
}

}  // namespace

CaptureTrace capture(const Image& x, const CaptureConfig& config, const MaskGenerator& mask) {
  config.validate();
  check_scene(x, config);

  const BlockGrid grid(config.image_size, config.block_size);
  const std::size_t total = config.acquisitions();
  const PatternSource source{config.seed, config.pattern_mode, config.binary_threshold};

  CaptureTrace trace;
  trace.schedule = feedback_schedule(config.feedback_base, total);
  trace.feedback_count = feedback_exponent_count(config.feedback_base, total);
  trace.bundle.config = config;
  trace.bundle.records.reserve(total * grid.block_count() * config.channels());

  BlockSystem system(grid, config.channels(), total);
  SamplingWeight weight = SamplingWeight::ones(grid.pixels());
  const AdmmTvParams provisional = config.provisional_solver();

  for (std::size_t i = 1; i <= total; ++i) {
    auto start = Clock::now();
    const AperturePattern pattern = synthesize_pattern(weight, grid, source, i);
    std::vector<double> y = forward(pattern, x, grid);
    add_noise(y, config, i);
    trace.bundle.records.insert(trace.bundle.records.end(), y.begin(), y.end());
    system.append(pattern, y);
    trace.timings.acquisition_seconds += seconds_since(start);

    if (!is_feedback_index(trace.schedule, i)) continue;

    start = Clock::now();
    ReconstructionResult recon = solve_admm_tv(system, i, provisional);
    trace.timings.provisional_seconds += seconds_since(start);

    start = Clock::now();
    const RngStream jitter{config.seed, static_cast<std::uint32_t>(i), 0, Purpose::Jitter};
    weight = mask.generate(recon.estimate, i, jitter);
    weight.source = i;
    trace.timings.mask_seconds += seconds_since(start);

    trace.bundle.events.push_back({i, weight.values});
    trace.snapshots.push_back(
        {i, std::move(recon.estimate), weight, SolverDiagnostics::of(recon)});
  }

  const auto start = Clock::now();
  trace.final = solve_admm_tv(system, total, config.solver);
  trace.timings.final_seconds = seconds_since(start);
  return trace;
}

CaptureTrace capture(const Image& x, const std::vector<BoundingBox>& boxes,
                     const CaptureConfig& config) {
  config.validate();
  const auto mask = make_mask_generator(config, boxes);
  return capture(x, config, *mask);
}

ReconstructionResult replay_attack_result(const MeasurementBundle& bundle,
                                          const AdmmTvParams& params) {
  bundle.validate();
  return reconstruct_admm_tv(bundle, bundle.config.acquisitions(), params);
}

Image replay_attack(const MeasurementBundle& bundle, const AdmmTvParams& params) {
  return replay_attack_result(bundle, params).estimate;
}

std::vector<double> simulate_measurements(const MeasurementBundle& bundle, const Image& x) {
  check_scene(x, bundle.config);
  const BlockGrid grid = bundle.grid();
  std::vector<double> records;
  records.reserve(bundle.records.size());
  for (std::size_t i = 1; i <= bundle.config.acquisitions(); ++i) {
    std::vector<double> y = forward(bundle.pattern(i, grid), x, grid);
    add_noise(y, bundle.config, i);
    records.insert(records.end(), y.begin(), y.end());
  }
  return records;
}

ReplayReport verify_replay(const MeasurementBundle& bundle, const Image& x) {
  bundle.validate();
  ReplayReport report;
  const auto schedule =
      feedback_schedule(bundle.config.feedback_base, bundle.config.acquisitions());
  report.schedule_matches = schedule.size() == bundle.events.size();
  for (std::size_t k = 0; report.schedule_matches && k < schedule.size(); ++k)
    report.schedule_matches = schedule[k] == bundle.events[k].index;

  const auto replayed = simulate_measurements(bundle, x);
  report.records_checked = replayed.size();
  for (std::size_t k = 0; k < replayed.size(); ++k)
    report.max_deviation = std::max(report.max_deviation, std::abs(replayed[k] - bundle.records[k]));
  return report;
}

}  // namespace spi
