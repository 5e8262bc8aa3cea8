#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spi {

/// Square raster with 1 or 3 channels. Samples are stored channel-planar,
/// row-major within a plane: index = c * side * side + row * side + col.
class Image {
public:
  Image() = default;
  Image(std::size_t side, std::size_t channels, double fill = 0.0);

  std::size_t side() const noexcept { return side_; }
  std::size_t channels() const noexcept { return channels_; }
  /// Pixels per channel (N).
  std::size_t pixels() const noexcept { return side_ * side_; }
  bool empty() const noexcept { return data_.empty(); }

  double& at(std::size_t row, std::size_t col, std::size_t c = 0) {
    return data_[c * pixels() + row * side_ + col];
  }
  double at(std::size_t row, std::size_t col, std::size_t c = 0) const {
    return data_[c * pixels() + row * side_ + col];
  }

  std::span<double> plane(std::size_t c) { return {data_.data() + c * pixels(), pixels()}; }
  std::span<const double> plane(std::size_t c) const {
    return {data_.data() + c * pixels(), pixels()};
  }

  std::span<double> samples() noexcept { return data_; }
  std::span<const double> samples() const noexcept { return data_; }

  /// Clamp every sample into [0,1].
  void clamp();
  /// True when every sample is finite and inside [0,1].
  bool in_range() const;
  /// Throws a config error unless channels is 1 or 3 and in_range() holds.
  void validate() const;

  bool operator==(const Image&) const = default;

private:
  std::size_t side_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> data_;
};

/// Rec. 601 luma: 0.299 R + 0.587 G + 0.114 B. Mono images are returned unchanged.
Image to_luminance(const Image& image);

}  // namespace spi
