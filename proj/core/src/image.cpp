#include "spi/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spi/error.hpp"

namespace spi {

Image::Image(std::size_t side, std::size_t channels, double fill)
    : side_(side), channels_(channels), data_(side * side * channels, fill) {}

void Image::clamp() {
  for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

bool Image::in_range() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; });
}

void Image::validate() const {
  if (channels_ != 1 && channels_ != 3)
    fail(ErrorKind::Config, "image must have 1 or 3 channels, got " + std::to_string(channels_));
  if (side_ == 0) fail(ErrorKind::Config, "image is empty");
  if (!in_range()) fail(ErrorKind::Config, "image samples must be finite and within [0,1]");
}

Image to_luminance(const Image& image) {
  if (image.channels() != 3) return image;
  Image out(image.side(), 1);
  const auto r = image.plane(0), g = image.plane(1), b = image.plane(2);
  auto y = out.plane(0);
  for (std::size_t p = 0; p < y.size(); ++p) y[p] = 0.299 * r[p] + 0.587 * g[p] + 0.114 * b[p];
  return out;
}

}  // namespace spi
