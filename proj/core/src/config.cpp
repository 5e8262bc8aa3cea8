#include "spi/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string quote(std::string_view key, std::string_view value) {
  return "'" + std::string(key) + "' = '" + std::string(value) + "'";
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out))
    fail(ErrorKind::Config, "expected a number for " + quote(key, value));
  return out;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view value) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    fail(ErrorKind::Config, "expected a non-negative integer for " + quote(key, value));
  return out;
}

template <typename Enum, std::size_t N>
Enum to_enum(std::string_view key, std::string_view value, const Enum (&options)[N]) {
  for (Enum e : options)
    if (to_string(e) == value) return e;
  fail(ErrorKind::Config, "unrecognized value for " + quote(key, value));
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::Config, what);
}

}  // namespace

std::string_view to_string(PatternMode mode) {
  return mode == PatternMode::Gaussian ? "gaussian" : "binary";
}
std::string_view to_string(ChannelMode mode) { return mode == ChannelMode::Mono ? "mono" : "rgb"; }
std::string_view to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::Passthrough: return "passthrough";
    case MaskKind::Oracle: return "oracle";
    case MaskKind::Silhouette: return "silhouette";
  }
  return "passthrough";
}
std::string_view to_string(TvFlavor flavor) {
  return flavor == TvFlavor::Anisotropic ? "anisotropic" : "isotropic";
}

void AdmmTvParams::validate() const {
  require(lambda >= 0.0, "solver.lambda must be >= 0");
  require(rho > 0.0, "solver.rho must be > 0");
  require(max_iterations >= 1, "solver.max_iterations must be >= 1");
  require(tolerance > 0.0, "solver.tolerance must be > 0");
}

void MaskParams::validate() const {
  require(dilation >= 0.0, "mask.dilation must be >= 0");
  require(softness >= 0.0, "mask.softness must be >= 0");
  require(jitter_base >= 0.0, "mask.jitter_base must be >= 0");
  require(cell >= 1, "mask.cell must be >= 1");
  require(mean_lo <= mean_hi, "mask.mean_lo must not exceed mask.mean_hi");
  require(max_std >= 0.0, "mask.max_std must be >= 0");
}

std::size_t CaptureConfig::acquisitions() const {
  return static_cast<std::size_t>(std::llround(sampling_rate * static_cast<double>(block_pixels())));
}

AdmmTvParams CaptureConfig::provisional_solver() const {
  AdmmTvParams p = solver;
  p.max_iterations = provisional_iterations;
  return p;
}

void CaptureConfig::validate() const {
  require(image_size >= 1, "image_size must be >= 1");
  require(block_size >= 1 && image_size % block_size == 0,
          "block_size " + std::to_string(block_size) + " must divide image_size " +
              std::to_string(image_size));
  require(sampling_rate > 0.0 && sampling_rate <= 1.0, "sampling_rate must be in (0, 1]");
  require(acquisitions() >= 1, "sampling_rate * block_size^2 must round to at least 1");
  require(feedback_base > 1.0, "feedback_base must be > 1");
  require(binary_threshold >= 0.0 && binary_threshold <= 1.0, "binary_threshold must be in [0, 1]");
  require(noise_std >= 0.0, "noise_std must be >= 0");
  require(provisional_iterations >= 1, "provisional_iterations must be >= 1");
  mask.validate();
  solver.validate();
}

CaptureConfig desk_scale() { return CaptureConfig{}; }

CaptureConfig paper_scale() {
  CaptureConfig c;
  c.image_size = 256;
  c.block_size = 32;
  return c;
}

void apply_setting(CaptureConfig& c, std::string_view key, std::string_view value) {
  static constexpr PatternMode kPatterns[] = {PatternMode::Gaussian, PatternMode::Binary};
  static constexpr ChannelMode kChannels[] = {ChannelMode::Mono, ChannelMode::Rgb};
  static constexpr MaskKind kMasks[] = {MaskKind::Passthrough, MaskKind::Oracle,
                                        MaskKind::Silhouette};
  static constexpr TvFlavor kFlavors[] = {TvFlavor::Anisotropic, TvFlavor::Isotropic};

  if (key == "image_size") c.image_size = to_integer<std::size_t>(key, value);
  else if (key == "block_size") c.block_size = to_integer<std::size_t>(key, value);
  else if (key == "sampling_rate") c.sampling_rate = to_double(key, value);
  else if (key == "feedback_base") c.feedback_base = to_double(key, value);
  else if (key == "pattern_mode") c.pattern_mode = to_enum(key, value, kPatterns);
  else if (key == "channel_mode") c.channel_mode = to_enum(key, value, kChannels);
  else if (key == "binary_threshold") c.binary_threshold = to_double(key, value);
  else if (key == "noise_std") c.noise_std = to_double(key, value);
  else if (key == "seed") c.seed = to_integer<std::uint64_t>(key, value);
  else if (key == "provisional_iterations") c.provisional_iterations = to_integer<std::size_t>(key, value);
  else if (key == "mask.kind") c.mask.kind = to_enum(key, value, kMasks);
  else if (key == "mask.dilation") c.mask.dilation = to_double(key, value);
  else if (key == "mask.softness") c.mask.softness = to_double(key, value);
  else if (key == "mask.jitter_base") c.mask.jitter_base = to_double(key, value);
  else if (key == "mask.cell") c.mask.cell = to_integer<std::size_t>(key, value);
  else if (key == "mask.mean_lo") c.mask.mean_lo = to_double(key, value);
  else if (key == "mask.mean_hi") c.mask.mean_hi = to_double(key, value);
  else if (key == "mask.max_std") c.mask.max_std = to_double(key, value);
  else if (key == "solver.lambda") c.solver.lambda = to_double(key, value);
  else if (key == "solver.rho") c.solver.rho = to_double(key, value);
  else if (key == "solver.max_iterations") c.solver.max_iterations = to_integer<std::size_t>(key, value);
  else if (key == "solver.tolerance") c.solver.tolerance = to_double(key, value);
  else if (key == "solver.tv") c.solver.tv = to_enum(key, value, kFlavors);
  else fail(ErrorKind::Config, "unknown config key '" + std::string(key) + "'");
}

CaptureConfig parse_config(std::string_view text, CaptureConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorKind::Config, "config line " + std::to_string(line_no) + ": expected 'key = value'");
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

CaptureConfig load_config(const std::filesystem::path& path, CaptureConfig base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

std::string to_text(const CaptureConfig& c) {
  std::ostringstream out;
  out << "image_size = " << c.image_size << '\n'
      << "block_size = " << c.block_size << '\n'
      << "sampling_rate = " << format_double(c.sampling_rate) << '\n'
      << "feedback_base = " << format_double(c.feedback_base) << '\n'
      << "pattern_mode = " << to_string(c.pattern_mode) << '\n'
      << "channel_mode = " << to_string(c.channel_mode) << '\n'
      << "binary_threshold = " << format_double(c.binary_threshold) << '\n'
      << "noise_std = " << format_double(c.noise_std) << '\n'
      << "seed = " << c.seed << '\n'
      << "provisional_iterations = " << c.provisional_iterations << '\n'
      << "mask.kind = " << to_string(c.mask.kind) << '\n'
      << "mask.dilation = " << format_double(c.mask.dilation) << '\n'
      << "mask.softness = " << format_double(c.mask.softness) << '\n'
      << "mask.jitter_base = " << format_double(c.mask.jitter_base) << '\n'
      << "mask.cell = " << c.mask.cell << '\n'
      << "mask.mean_lo = " << format_double(c.mask.mean_lo) << '\n'
      << "mask.mean_hi = " << format_double(c.mask.mean_hi) << '\n'
      << "mask.max_std = " << format_double(c.mask.max_std) << '\n'
      << "solver.lambda = " << format_double(c.solver.lambda) << '\n'
      << "solver.rho = " << format_double(c.solver.rho) << '\n'
      << "solver.max_iterations = " << c.solver.max_iterations << '\n'
      << "solver.tolerance = " << format_double(c.solver.tolerance) << '\n'
      << "solver.tv = " << to_string(c.solver.tv) << '\n';
  return out.str();
}

}  // namespace spi
