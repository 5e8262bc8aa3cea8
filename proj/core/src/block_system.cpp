#include "spi/block_system.hpp"

#include <cmath>
#include <string>

#include "spi/error.hpp"

namespace spi {

BlockSystem::BlockSystem(BlockGrid grid, std::size_t channels, std::size_t capacity)
    : grid_(std::move(grid)), channels_(channels) {
  const auto cap = static_cast<Eigen::Index>(capacity);
  const auto n = static_cast<Eigen::Index>(grid_.block_pixels());
  rows_.assign(grid_.block_count(), RowMatrix::Zero(cap, n));
  y_.assign(grid_.block_count(), RowMatrix::Zero(cap, static_cast<Eigen::Index>(channels)));
}

BlockSystem BlockSystem::from_bundle(const MeasurementBundle& bundle, std::size_t upto) {
  if (upto < 1 || upto > bundle.recorded_acquisitions())
    fail(ErrorKind::Config, "acquisition index " + std::to_string(upto) + " outside [1, " +
                                std::to_string(bundle.recorded_acquisitions()) + "]");
  BlockSystem system(bundle.grid(), bundle.channels(), upto);
  for (std::size_t i = 1; i <= upto; ++i)
    system.append(bundle.pattern(i, system.grid()), bundle.acquisition(i));
  return system;
}

void BlockSystem::append(const AperturePattern& pattern, std::span<const double> measurements) {
  if (rows_.empty()) return;
  if (count_ >= static_cast<std::size_t>(rows_.front().rows()))
    fail(ErrorKind::Dimension, "block system capacity exceeded");
  if (measurements.size() != grid_.block_count() * channels_ ||
      pattern.coefficients.size() != grid_.pixels())
    fail(ErrorKind::Dimension, "acquisition does not match block system shape");
  const auto row = static_cast<Eigen::Index>(count_);
  for (std::size_t j = 0; j < grid_.block_count(); ++j) {
    const auto phi = pattern.block(j);
    for (std::size_t k = 0; k < phi.size(); ++k) rows_[j](row, static_cast<Eigen::Index>(k)) = phi[k];
    for (std::size_t c = 0; c < channels_; ++c)
      y_[j](row, static_cast<Eigen::Index>(c)) = measurements[j * channels_ + c];
  }
  ++count_;
}

Eigen::MatrixXd BlockSystem::gather(const Eigen::MatrixXd& pixels, std::size_t block) const {
  const auto idx = grid_.block_pixel_indices(block);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), pixels.cols());
  for (std::size_t k = 0; k < idx.size(); ++k)
    out.row(static_cast<Eigen::Index>(k)) = pixels.row(static_cast<Eigen::Index>(idx[k]));
  return out;
}

void BlockSystem::scatter(const Eigen::MatrixXd& block_values, std::size_t block,
                          Eigen::MatrixXd& pixels) const {
  const auto idx = grid_.block_pixel_indices(block);
  for (std::size_t k = 0; k < idx.size(); ++k)
    pixels.row(static_cast<Eigen::Index>(idx[k])) = block_values.row(static_cast<Eigen::Index>(k));
}

double BlockSystem::misfit(const Eigen::MatrixXd& pixels, std::size_t upto) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < grid_.block_count(); ++j)
    sum += (rows(j, upto) * gather(pixels, j) - measurements(j, upto)).squaredNorm();
  return std::sqrt(sum);
}

Eigen::MatrixXd to_matrix(const Image& image) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(image.pixels()),
                    static_cast<Eigen::Index>(image.channels()));
  for (std::size_t c = 0; c < image.channels(); ++c) {
    const auto plane = image.plane(c);
    for (std::size_t p = 0; p < plane.size(); ++p)
      m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) = plane[p];
  }
  return m;
}

Image to_image(const Eigen::MatrixXd& pixels, std::size_t side) {
  Image out(side, static_cast<std::size_t>(pixels.cols()));
  for (std::size_t c = 0; c < out.channels(); ++c) {
    auto plane = out.plane(c);
    for (std::size_t p = 0; p < plane.size(); ++p)
      plane[p] = pixels(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c));
  }
  return out;
}

}  // namespace spi
