#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spi/bounding_box.hpp"
#include "spi/image.hpp"

namespace spi {

struct Scene {
  Image image;
  std::vector<BoundingBox> boxes;
};

/// Seeded piecewise-constant test scene: a flat background, a few rectangles
/// and disks, and one square target (side / 4 wide) filled with a
/// high-contrast checkerboard whose squares are side / 16 wide. The target's
/// bounding box is returned with label "target".
Scene make_phantom(std::size_t side, std::uint64_t seed, std::size_t channels = 1);

}  // namespace spi
