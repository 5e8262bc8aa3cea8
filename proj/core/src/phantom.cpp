#include "spi/phantom.hpp"

#include <algorithm>

#include "spi/rng.hpp"

namespace spi {

Scene make_phantom(std::size_t side, std::uint64_t seed, std::size_t channels) {
  RngReader rng({seed, 0, 0, Purpose::Phantom});
  const auto pick = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  const auto pick_index = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo));
  };
  const long s = static_cast<long>(side);

  Scene scene{Image(side, channels), {}};
  std::vector<double> tint(channels);
  const auto fill = [&](auto&& inside, double level) {
    for (double& t : tint) t = std::clamp(level + (channels > 1 ? pick(-0.1, 0.1) : 0.0), 0.0, 1.0);
    for (long r = 0; r < s; ++r)
      for (long c = 0; c < s; ++c)
        if (inside(r, c))
          for (std::size_t ch = 0; ch < channels; ++ch) scene.image.at(r, c, ch) = tint[ch];
  };

  fill([](long, long) { return true; }, pick(0.1, 0.3));
  const std::size_t rects = pick_index(3, 6);
  for (std::size_t k = 0; k < rects; ++k) {
    const long x0 = static_cast<long>(pick_index(0, side - side / 8));
    const long y0 = static_cast<long>(pick_index(0, side - side / 8));
    const long w = static_cast<long>(pick_index(side / 8, side / 2));
    const long h = static_cast<long>(pick_index(side / 8, side / 2));
    fill([&](long r, long c) { return c >= x0 && c < x0 + w && r >= y0 && r < y0 + h; },
         pick(0.2, 0.9));
  }
  const std::size_t disks = pick_index(1, 3);
  for (std::size_t k = 0; k < disks; ++k) {
    const double cx = pick(0.0, static_cast<double>(side)), cy = pick(0.0, static_cast<double>(side));
    const double radius = pick(side / 16.0, side / 6.0);
    fill([&](long r, long c) {
           const double dx = c + 0.5 - cx, dy = r + 0.5 - cy;
           return dx * dx + dy * dy <= radius * radius;
         },
         pick(0.2, 0.9));
  }

  const long box = std::max<long>(4, s / 4);
  const long square = std::max<long>(1, s / 16);
  const long x0 = static_cast<long>(pick_index(side / 8, side - side / 8 - static_cast<std::size_t>(box)));
  const long y0 = static_cast<long>(pick_index(side / 8, side - side / 8 - static_cast<std::size_t>(box)));
  const double bright = pick(0.75, 0.95), dark = pick(0.05, 0.3);
  for (long r = y0; r < y0 + box; ++r)
    for (long c = x0; c < x0 + box; ++c) {
      const bool on = (((r - y0) / square) + ((c - x0) / square)) % 2 == 0;
      for (std::size_t ch = 0; ch < channels; ++ch) scene.image.at(r, c, ch) = on ? bright : dark;
    }
  scene.boxes.push_back({x0, y0, x0 + box, y0 + box, "target"});
  return scene;
}

}  // namespace spi
