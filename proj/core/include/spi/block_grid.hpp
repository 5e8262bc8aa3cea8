#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spi {

struct BlockLocation {
  std::size_t block;
  std::size_t offset;
  bool operator==(const BlockLocation&) const = default;
};

/// Partition of an L x L raster into non-overlapping B x B blocks. Blocks are
/// numbered row-major over the block lattice; offsets are row-major inside a
/// block. The block-major order (block 0 offsets 0..n-1, block 1, ...) is the
/// layout used for aperture patterns.
class BlockGrid {
public:
  /// Throws a config error unless block_side divides side.
  BlockGrid(std::size_t side, std::size_t block_side);

  std::size_t side() const noexcept { return side_; }
  std::size_t block_side() const noexcept { return block_side_; }
  std::size_t pixels() const noexcept { return side_ * side_; }
  std::size_t block_pixels() const noexcept { return block_side_ * block_side_; }
  std::size_t block_count() const noexcept { return blocks_per_row_ * blocks_per_row_; }
  std::size_t blocks_per_row() const noexcept { return blocks_per_row_; }

  std::size_t pixel(std::size_t block, std::size_t offset) const {
    return to_pixel_[block * block_pixels() + offset];
  }
  BlockLocation locate(std::size_t pixel) const;

  /// Pixel indices of one block, in offset order.
  std::span<const std::size_t> block_pixel_indices(std::size_t block) const {
    return {to_pixel_.data() + block * block_pixels(), block_pixels()};
  }

  bool operator==(const BlockGrid& other) const {
    return side_ == other.side_ && block_side_ == other.block_side_;
  }

private:
  std::size_t side_;
  std::size_t block_side_;
  std::size_t blocks_per_row_;
  std::vector<std::size_t> to_pixel_;
};

}  // namespace spi
