#pragma once

#include <cstddef>
#include <vector>

#include "spi/bounding_box.hpp"
#include "spi/bundle.hpp"
#include "spi/config.hpp"
#include "spi/image.hpp"
#include "spi/mask.hpp"
#include "spi/reconstruct.hpp"

namespace spi {

struct SolverDiagnostics {
  std::size_t iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;

  static SolverDiagnostics of(const ReconstructionResult& r) {
    return {r.iterations, r.converged, r.primal_residual, r.dual_residual};
  }
};

/// State at one feedback: the provisional reconstruction from the first
/// `index` acquisitions and the weight it produced for acquisition index + 1.
struct FeedbackSnapshot {
  std::size_t index = 0;
  Image provisional;
  SamplingWeight weight;
  SolverDiagnostics solver;
};

struct PhaseTimings {
  double acquisition_seconds = 0.0;
  double provisional_seconds = 0.0;
  double mask_seconds = 0.0;
  double final_seconds = 0.0;
};

struct CaptureTrace {
  std::vector<std::size_t> schedule;
  /// Exponent count t with floor(K^t) < M' (reported as the number of feedbacks).
  std::size_t feedback_count = 0;
  std::vector<FeedbackSnapshot> snapshots;
  ReconstructionResult final;
  MeasurementBundle bundle;
  PhaseTimings timings;
};

/// Adaptive acquisition loop:
///   w = 1; for i = 1..M': phi_i = w (.) n_i; y_i = Forward(phi_i, x);
///   if i is a feedback index: x_i = Recon(y_[1,i], Phi_[1,i]); w = mask(x_i, i)
/// followed by a full-quality reconstruction from all M' acquisitions.
/// Provisional reconstructions use config.provisional_iterations.
CaptureTrace capture(const Image& x, const CaptureConfig& config, const MaskGenerator& mask);
/// Uses make_mask_generator(config, boxes).
CaptureTrace capture(const Image& x, const std::vector<BoundingBox>& boxes,
                     const CaptureConfig& config);

/// Reconstruction from leaked data only (Phi regenerated from the bundle, y).
ReconstructionResult replay_attack_result(const MeasurementBundle& bundle, const AdmmTvParams& params);
Image replay_attack(const MeasurementBundle& bundle, const AdmmTvParams& params);

/// Measurements the bundle's patterns would record for scene x, including the
/// seeded sensor noise when noise_std > 0.
std::vector<double> simulate_measurements(const MeasurementBundle& bundle, const Image& x);

struct ReplayReport {
  bool schedule_matches = false;  // event indices equal the feedback schedule
  std::size_t records_checked = 0;
  double max_deviation = 0.0;     // max |y_recorded - y_replayed|
};

/// Regenerates every phi_i from (seed, events), re-measures x and compares.
ReplayReport verify_replay(const MeasurementBundle& bundle, const Image& x);

}  // namespace spi
