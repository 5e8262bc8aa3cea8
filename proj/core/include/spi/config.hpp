#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace spi {

enum class PatternMode { Gaussian, Binary };
enum class ChannelMode { Mono, Rgb };
enum class MaskKind { Passthrough, Oracle, Silhouette };
enum class TvFlavor { Anisotropic, Isotropic };

struct AdmmTvParams {
  double lambda = 0.05;  // TV weight
  double rho = 1.0;      // initial augmented-Lagrangian penalty
  std::size_t max_iterations = 200;
  double tolerance = 1e-4;  // on RMS primal and dual residuals
  TvFlavor tv = TvFlavor::Anisotropic;

  void validate() const;
  bool operator==(const AdmmTvParams&) const = default;
};

struct MaskParams {
  MaskKind kind = MaskKind::Passthrough;
  double dilation = 2.0;     // pixels added around each detected region
  double softness = 2.0;     // width of the linear ramp from 0 to 1, pixels
  double jitter_base = 4.0;  // oracle corner jitter std at i = 1; decays by log_K(i)
  std::size_t cell = 4;      // silhouette statistics cell side, pixels
  double mean_lo = 0.6;      // silhouette signature: accepted mean band
  double mean_hi = 1.0;
  double max_std = 0.15;     // silhouette signature: maximum cell std

  void validate() const;
  bool operator==(const MaskParams&) const = default;
};

/// Everything needed to run one capture. Serialized as flat `key = value`
/// text whose keys are the field names (nested fields use `mask.` and
/// `solver.` prefixes).
struct CaptureConfig {
  std::size_t image_size = 64;  // L
  std::size_t block_size = 8;   // B
  double sampling_rate = 0.5;   // r = M / N
  double feedback_base = 4.0;   // K
  PatternMode pattern_mode = PatternMode::Gaussian;
  ChannelMode channel_mode = ChannelMode::Mono;
  double binary_threshold = 0.5;
  double noise_std = 0.0;
  std::uint64_t seed = 1;
  MaskParams mask;
  AdmmTvParams solver;
  std::size_t provisional_iterations = 50;

  std::size_t block_pixels() const { return block_size * block_size; }
  std::size_t block_count() const { return (image_size / block_size) * (image_size / block_size); }
  std::size_t pixels() const { return image_size * image_size; }
  std::size_t channels() const { return channel_mode == ChannelMode::Rgb ? 3 : 1; }
  /// M' = round(r * n).
  std::size_t acquisitions() const;
  /// M = M' * N_b.
  std::size_t measurements() const { return acquisitions() * block_count(); }
  /// Solver settings for in-loop provisional reconstructions.
  AdmmTvParams provisional_solver() const;

  /// Throws a config error describing the first violated constraint.
  void validate() const;
  bool operator==(const CaptureConfig&) const = default;
};

/// L = 64, B = 8, r = 0.5, K = 4, mono.
CaptureConfig desk_scale();
/// L = 256, B = 32, r = 0.5, K = 4 (M' = 512, five feedbacks).
CaptureConfig paper_scale();

/// Applies one `key = value` assignment; unknown keys are a config error.
void apply_setting(CaptureConfig& config, std::string_view key, std::string_view value);
/// Parses config text on top of `base`. '#' starts a comment.
CaptureConfig parse_config(std::string_view text, CaptureConfig base = {});
CaptureConfig load_config(const std::filesystem::path& path, CaptureConfig base = {});
/// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const CaptureConfig& config);

std::string_view to_string(PatternMode mode);
std::string_view to_string(ChannelMode mode);
std::string_view to_string(MaskKind kind);
std::string_view to_string(TvFlavor flavor);

}  // namespace spi
