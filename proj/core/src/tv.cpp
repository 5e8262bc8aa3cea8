#include "spi/tv.hpp"

#include <cmath>
#include <vector>

namespace spi {

void gradient(std::span<const double> x, std::size_t side, std::span<double> gh,
              std::span<double> gv) {
  for (std::size_t r = 0; r < side; ++r) {
    const std::size_t row = r * side;
    for (std::size_t c = 0; c < side; ++c) {
      const std::size_t p = row + c;
      gh[p] = c + 1 < side ? x[p + 1] - x[p] : 0.0;
      gv[p] = r + 1 < side ? x[p + side] - x[p] : 0.0;
    }
  }
}

void gradient_adjoint(std::span<const double> gh, std::span<const double> gv, std::size_t side,
                      std::span<double> out) {
  for (std::size_t r = 0; r < side; ++r) {
    const std::size_t row = r * side;
    for (std::size_t c = 0; c < side; ++c) {
      const std::size_t p = row + c;
      double v = 0.0;
      if (c + 1 < side) v -= gh[p];
      if (c > 0) v += gh[p - 1];
      if (r + 1 < side) v -= gv[p];
      if (r > 0) v += gv[p - side];
      out[p] = v;
    }
  }
}

double tv(std::span<const double> plane, std::size_t side, TvFlavor flavor) {
  std::vector<double> gh(plane.size()), gv(plane.size());
  gradient(plane, side, gh, gv);
  double sum = 0.0;
  for (std::size_t p = 0; p < plane.size(); ++p)
    sum += flavor == TvFlavor::Anisotropic ? std::abs(gh[p]) + std::abs(gv[p])
                                           : std::hypot(gh[p], gv[p]);
  return sum;
}

double tv(const Image& image, TvFlavor flavor) {
  double sum = 0.0;
  for (std::size_t c = 0; c < image.channels(); ++c) sum += tv(image.plane(c), image.side(), flavor);
  return sum;
}

}  // namespace spi
