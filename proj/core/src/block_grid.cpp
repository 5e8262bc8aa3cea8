#include "spi/block_grid.hpp"

#include <string>

#include "spi/error.hpp"

namespace spi {

BlockGrid::BlockGrid(std::size_t side, std::size_t block_side)
    : side_(side), block_side_(block_side) {
  if (side == 0 || block_side == 0 || side % block_side != 0)
    fail(ErrorKind::Config, "block side " + std::to_string(block_side) +
                                " must be positive and divide image side " + std::to_string(side));
  blocks_per_row_ = side / block_side;
  to_pixel_.resize(side * side);
  std::size_t k = 0;
  for (std::size_t br = 0; br < blocks_per_row_; ++br)
    for (std::size_t bc = 0; bc < blocks_per_row_; ++bc)
      for (std::size_t r = 0; r < block_side; ++r)
        for (std::size_t c = 0; c < block_side; ++c)
          to_pixel_[k++] = (br * block_side + r) * side + bc * block_side + c;
}

BlockLocation BlockGrid::locate(std::size_t pixel) const {
  const std::size_t row = pixel / side_, col = pixel % side_;
  const std::size_t block = (row / block_side_) * blocks_per_row_ + col / block_side_;
  const std::size_t offset = (row % block_side_) * block_side_ + col % block_side_;
  return {block, offset};
}

}  // namespace spi
