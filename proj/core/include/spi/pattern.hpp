#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spi/block_grid.hpp"
#include "spi/config.hpp"
#include "spi/image.hpp"

namespace spi {

/// Per-pixel sampling weight w in [0,1]^N, row-major pixel order.
struct SamplingWeight {
  std::vector<double> values;
  /// Acquisition index of the feedback that produced it; 0 for the initial
  /// all-ones weight.
  std::size_t source = 0;

  static SamplingWeight ones(std::size_t pixels) { return {std::vector<double>(pixels, 1.0), 0}; }
  bool in_range() const;
  bool operator==(const SamplingWeight&) const = default;
};

/// One row phi_i of the measurement matrix, stored block-major: coefficients of
/// block j occupy [j * n, (j + 1) * n) in the block's offset order.
struct AperturePattern {
  std::size_t acquisition = 0;
  std::size_t block_pixels = 0;
  std::vector<double> coefficients;

  std::span<const double> block(std::size_t j) const {
    return {coefficients.data() + j * block_pixels, block_pixels};
  }
  std::size_t block_count() const { return block_pixels ? coefficients.size() / block_pixels : 0; }
};

struct PatternSource {
  std::uint64_t seed = 0;
  PatternMode mode = PatternMode::Gaussian;
  double binary_threshold = 0.5;
};

/// phi_{i,j} = w_j (.) n_{i,j}. Gaussian mode draws n from N(0,1); binary mode
/// hard-thresholds w at binary_threshold and multiplies by fair random bits.
/// The random draw for (i, j) comes from stream (seed, i, j, Pattern or
/// PatternBits) so any block of any acquisition can be regenerated alone.
std::vector<double> synthesize_block(const SamplingWeight& weight, const BlockGrid& grid,
                                     const PatternSource& source, std::size_t acquisition,
                                     std::size_t block);

AperturePattern synthesize_pattern(const SamplingWeight& weight, const BlockGrid& grid,
                                   const PatternSource& source, std::size_t acquisition);

/// y_{i,j,c} = phi_{i,j} . x_{j,c}. Output is ordered block-major, channel-minor
/// (index j * channels + c). Throws a dimension error on shape mismatch.
std::vector<double> forward(const AperturePattern& pattern, const Image& x, const BlockGrid& grid);

}  // namespace spi
