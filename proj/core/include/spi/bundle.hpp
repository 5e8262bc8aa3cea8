#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "spi/block_grid.hpp"
#include "spi/config.hpp"
#include "spi/pattern.hpp"

namespace spi {

/// The sampling weight produced at feedback index i; it shapes acquisitions
/// i + 1 onward until the next event.
struct FeedbackEvent {
  std::size_t index = 0;
  std::vector<double> weight;
  bool operator==(const FeedbackEvent&) const = default;
};

/// Everything an observer of the sensor output holds: the capture settings,
/// the master seed, the feedback weights and every measurement. The
/// measurement matrix is regenerated from (seed, events); it is never stored.
struct MeasurementBundle {
  static constexpr std::uint32_t kFormatVersion = 1;

  CaptureConfig config;
  std::vector<FeedbackEvent> events;
  /// y_{i,j,c} at ((i - 1) * N_b + j) * channels + c, i = 1..M'.
  std::vector<double> records;

  std::uint64_t seed() const { return config.seed; }
  std::size_t channels() const { return config.channels(); }
  std::size_t block_count() const { return config.block_count(); }
  /// Number of complete acquisitions present in records.
  std::size_t recorded_acquisitions() const;

  double record(std::size_t i, std::size_t j, std::size_t c) const {
    return records[((i - 1) * block_count() + j) * channels() + c];
  }
  /// The N_b * channels measurements of acquisition i.
  std::span<const double> acquisition(std::size_t i) const {
    const std::size_t stride = block_count() * channels();
    return {records.data() + (i - 1) * stride, stride};
  }

  /// Weight in force for acquisition i (the latest event with index < i).
  SamplingWeight weight_for(std::size_t i) const;
  /// Regenerates phi_i from (seed, events).
  AperturePattern pattern(std::size_t i, const BlockGrid& grid) const;
  BlockGrid grid() const { return BlockGrid(config.image_size, config.block_size); }
  PatternSource pattern_source() const {
    return {config.seed, config.pattern_mode, config.binary_threshold};
  }

  /// Throws a config/format error unless the bundle is complete and consistent.
  void validate() const;
  bool operator==(const MeasurementBundle&) const = default;
};

// Binary layout (all integers and floats little-endian):
//   magic            8 bytes  89 'S' 'P' 'I' 'B' 0D 0A 1A
//   version          u32      kFormatVersion
//   config_length    u32
//   config           config_length bytes, canonical `key = value` text
//   seed             u64      must equal the config seed
//   image_size       u32
//   block_size       u32
//   acquisitions     u32      M'
//   block_count      u32      N_b
//   channels         u32
//   event_count      u32
//   events           event_count x { index u32, length u32, length x f64 }
//   record_count     u64      M' * N_b * channels
//   records          record_count x f64
//   crc32            u32      zlib CRC-32 of every preceding byte
std::vector<std::uint8_t> encode_bundle(const MeasurementBundle& bundle);
MeasurementBundle decode_bundle(std::span<const std::uint8_t> bytes);

void write_bundle(const MeasurementBundle& bundle, std::ostream& sink);
MeasurementBundle read_bundle(std::istream& source);
void save_bundle(const MeasurementBundle& bundle, const std::filesystem::path& path);
MeasurementBundle load_bundle(const std::filesystem::path& path);

}  // namespace spi
