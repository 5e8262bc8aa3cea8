#include "spi/pattern.hpp"

#include <algorithm>
#include <string>

#include "spi/error.hpp"
#include "spi/rng.hpp"

namespace spi {

bool SamplingWeight::in_range() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

std::vector<double> synthesize_block(const SamplingWeight& weight, const BlockGrid& grid,
                                     const PatternSource& source, std::size_t acquisition,
                                     std::size_t block) {
  const std::size_t n = grid.block_pixels();
  RngStream stream{source.seed, static_cast<std::uint32_t>(acquisition),
                   static_cast<std::uint32_t>(block), Purpose::Pattern};
  const auto pixels = grid.block_pixel_indices(block);
  std::vector<double> phi;
  if (source.mode == PatternMode::Gaussian) {
    phi = draw_normal(stream, n);
    for (std::size_t k = 0; k < n; ++k) phi[k] *= weight.values[pixels[k]];
  } else {
    stream.purpose = Purpose::PatternBits;
    phi = draw_bits(stream, n);
    for (std::size_t k = 0; k < n; ++k)
      if (weight.values[pixels[k]] < source.binary_threshold) phi[k] = 0.0;
  }
  return phi;
}

AperturePattern synthesize_pattern(const SamplingWeight& weight, const BlockGrid& grid,
                                   const PatternSource& source, std::size_t acquisition) {
  if (weight.values.size() != grid.pixels())
    fail(ErrorKind::Dimension, "sampling weight has " + std::to_string(weight.values.size()) +
                                   " pixels, grid has " + std::to_string(grid.pixels()));
  AperturePattern pattern{acquisition, grid.block_pixels(), {}};
  pattern.coefficients.reserve(grid.pixels());
  for (std::size_t j = 0; j < grid.block_count(); ++j) {
    const auto phi = synthesize_block(weight, grid, source, acquisition, j);
    pattern.coefficients.insert(pattern.coefficients.end(), phi.begin(), phi.end());
  }
  return pattern;
}

std::vector<double> forward(const AperturePattern& pattern, const Image& x, const BlockGrid& grid) {
  if (x.side() != grid.side() || pattern.coefficients.size() != grid.pixels() ||
      pattern.block_pixels != grid.block_pixels()) {
    fail(ErrorKind::Dimension,
         "pattern of " + std::to_string(pattern.coefficients.size()) + " coefficients (block " +
             std::to_string(pattern.block_pixels) + ") vs image " + std::to_string(x.side()) + "x" +
             std::to_string(x.side()) + " on grid L=" + std::to_string(grid.side()) +
             " B=" + std::to_string(grid.block_side()));
  }
  const std::size_t channels = x.channels();
  std::vector<double> y(grid.block_count() * channels, 0.0);
  for (std::size_t j = 0; j < grid.block_count(); ++j) {
    const auto phi = pattern.block(j);
    const auto pixels = grid.block_pixel_indices(j);
    for (std::size_t c = 0; c < channels; ++c) {
      const auto plane = x.plane(c);
      double sum = 0.0;
      for (std::size_t k = 0; k < phi.size(); ++k) sum += phi[k] * plane[pixels[k]];
      y[j * channels + c] = sum;
    }
  }
  return y;
}

}  // namespace spi
