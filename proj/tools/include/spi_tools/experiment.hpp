#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spi/config.hpp"
#include "spi/error.hpp"
#include "spi/metrics.hpp"

namespace spi::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNotConverged = 4;

/// Maps an error kind to the documented process exit code.
int exit_code_for(ErrorKind kind);

enum class Method { Original, Defocus, OursPassthrough, OursOracle, OursSilhouette };

std::string_view to_string(Method method);
/// Accepts original, defocus, ours-passthrough, ours-oracle, ours-silhouette.
Method parse_method(std::string_view name);

enum class SweepAxis { None, FeedbackBase, SamplingRate };

struct ExperimentSpec {
  std::vector<std::filesystem::path> images;
  /// Box file applied to every image; when empty each image uses the file
  /// next to it with the extension replaced by ".boxes".
  std::optional<std::filesystem::path> boxes;
  CaptureConfig config;
  std::vector<Method> methods;
  std::filesystem::path out = "out";
  SweepAxis sweep = SweepAxis::None;
  std::vector<double> sweep_values;
  bool strict = false;
  /// Also write every provisional reconstruction and sampling weight.
  bool snapshots = false;
  /// Worker threads; 0 reads SPI_WORKERS, falling back to the hardware count.
  std::size_t workers = 0;

  /// Throws a config error for missing images or methods and bad sweep values.
  void validate() const;
};

struct CellResult {
  std::string image;
  std::string sweep;
  EvalRow row;
  double feedback_base = 0.0;
  double sampling_rate = 0.0;
  std::size_t acquisitions = 0;
  std::size_t n_feedbacks = 0;
  bool converged = true;
  double seconds = 0.0;
  std::filesystem::path directory;
};

struct ExperimentResult {
  int exit_code = kExitOk;
  std::string message;
  /// Ordered by image, sweep point, method regardless of execution order.
  std::vector<CellResult> cells;
};

/// Runs every (image, sweep point, method) cell and writes
///   <out>/<image>/<sweep>/<method>/{estimate.pgm|ppm, bundle.spib, manifest.json}
///   <out>/report.json, <out>/report.csv
/// Errors are reported through exit_code and message, not exceptions.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Directory label of a sweep point, e.g. "k4", "r0.25" or "base".
std::string sweep_label(SweepAxis axis, double value);

/// Comma-separated list of numbers.
std::vector<double> parse_number_list(std::string_view text);

std::size_t worker_count(std::size_t requested);

}  // namespace spi::tools
