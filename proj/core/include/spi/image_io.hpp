#pragma once

#include <filesystem>

#include "spi/config.hpp"
#include "spi/image.hpp"

namespace spi {

/// Reads a square PGM (P2/P5) or PPM (P3/P6) file; samples are scaled by
/// 1/maxval into [0,1]. Throws an io error for unreadable paths and a format
/// or truncated error for malformed content.
Image load_image(const std::filesystem::path& path);

/// Loads and adapts channels to the capture mode: RGB input in mono mode is
/// reduced with to_luminance() (0.299, 0.587, 0.114); gray input in rgb mode is
/// replicated to three channels.
Image load_image(const std::filesystem::path& path, ChannelMode mode);

/// Writes binary PGM (1 channel) or PPM (3 channels) at 8 bits, rounding
/// clamped samples to the nearest of 256 levels.
void save_image(const Image& image, const std::filesystem::path& path);

}  // namespace spi
