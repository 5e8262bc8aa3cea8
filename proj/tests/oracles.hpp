// Independent reference computations for tests. Nothing here calls into the
// code paths it is used to check.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spi/bounding_box.hpp"
#include "spi/image.hpp"

namespace spi::testing {

inline Image random_image(std::size_t side, std::size_t channels, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(side, channels);
  for (double& v : img.samples()) v = u(gen);
  return img;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(gen);
  return v;
}

/// Dot product of a block's coefficients with the block's pixels, addressing
/// pixels by (row, col) arithmetic instead of the grid's index table.
inline double naive_block_dot(const std::vector<double>& phi, const Image& x, std::size_t side,
                              std::size_t block_side, std::size_t block, std::size_t channel) {
  const std::size_t per_row = side / block_side;
  const std::size_t br = block / per_row, bc = block % per_row;
  double sum = 0.0;
  for (std::size_t r = 0; r < block_side; ++r)
    for (std::size_t c = 0; c < block_side; ++c)
      sum += phi[r * block_side + c] * x.at(br * block_side + r, bc * block_side + c, channel);
  return sum;
}

inline double naive_tv(const Image& img, bool isotropic) {
  const std::size_t L = img.side();
  double sum = 0.0;
  for (std::size_t ch = 0; ch < img.channels(); ++ch)
    for (std::size_t r = 0; r < L; ++r)
      for (std::size_t c = 0; c < L; ++c) {
        const double h = c + 1 < L ? img.at(r, c + 1, ch) - img.at(r, c, ch) : 0.0;
        const double v = r + 1 < L ? img.at(r + 1, c, ch) - img.at(r, c, ch) : 0.0;
        sum += isotropic ? std::sqrt(h * h + v * v) : std::abs(h) + std::abs(v);
      }
  return sum;
}

inline double naive_masked_mse(const Image& a, const Image& b, const std::vector<BoundingBox>& boxes,
                               bool inside) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t ch = 0; ch < a.channels(); ++ch)
    for (std::size_t r = 0; r < a.side(); ++r)
      for (std::size_t c = 0; c < a.side(); ++c) {
        bool in = false;
        for (const auto& box : boxes)
          in = in || (static_cast<long>(c) >= box.x0 && static_cast<long>(c) < box.x1 &&
                      static_cast<long>(r) >= box.y0 && static_cast<long>(r) < box.y1);
        if (in != inside) continue;
        const double d = a.at(r, c, ch) - b.at(r, c, ch);
        sum += d * d;
        ++count;
      }
  return sum / static_cast<double>(count);
}

/// Direct solve of a square per-block system by full-pivot LU.
inline Eigen::VectorXd direct_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  return a.fullPivLu().solve(y);
}

/// Exact binomial upper tail P(X >= k), X ~ Bin(n, 1/2).
inline double sign_test_p(int n, int k) {
  double p = 0.0;
  for (int j = k; j <= n; ++j) {
    double c = 1.0;
    for (int t = 0; t < j; ++t) c = c * (n - t) / (t + 1);
    p += c * std::pow(0.5, n);
  }
  return p;
}

}  // namespace spi::testing
