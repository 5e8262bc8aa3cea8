#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "spi/block_grid.hpp"
#include "spi/bundle.hpp"
#include "spi/image.hpp"
#include "spi/pattern.hpp"

namespace spi {

/// Accumulated per-block measurement rows Phi_{[1,i],j} and measurements
/// y_{[1,i],j}. Rows are appended acquisition by acquisition, so a capture
/// loop never regenerates earlier patterns.
class BlockSystem {
public:
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BlockSystem(BlockGrid grid, std::size_t channels, std::size_t capacity);

  /// Regenerates the first `upto` acquisitions of a bundle.
  static BlockSystem from_bundle(const MeasurementBundle& bundle, std::size_t upto);

  /// Appends phi_i and its measurements (ordered j * channels + c).
  void append(const AperturePattern& pattern, std::span<const double> measurements);

  const BlockGrid& grid() const { return grid_; }
  std::size_t channels() const { return channels_; }
  std::size_t acquisitions() const { return count_; }

  /// upto x n rows of block j.
  RowMatrix::ConstRowsBlockXpr rows(std::size_t block, std::size_t upto) const {
    return rows_[block].topRows(static_cast<Eigen::Index>(upto));
  }
  /// upto x channels measurements of block j.
  RowMatrix::ConstRowsBlockXpr measurements(std::size_t block, std::size_t upto) const {
    return y_[block].topRows(static_cast<Eigen::Index>(upto));
  }

  /// Gathers block j of every channel of an N x C pixel-order matrix into n x C.
  Eigen::MatrixXd gather(const Eigen::MatrixXd& pixels, std::size_t block) const;
  void scatter(const Eigen::MatrixXd& block_values, std::size_t block, Eigen::MatrixXd& pixels) const;

  /// sqrt(sum_j ||Phi_j x_j - y_j||^2) over the first `upto` acquisitions.
  double misfit(const Eigen::MatrixXd& pixels, std::size_t upto) const;

private:
  BlockGrid grid_;
  std::size_t channels_;
  std::size_t count_ = 0;
  std::vector<RowMatrix> rows_;
  std::vector<RowMatrix> y_;
};

/// N x C pixel-order matrix view of an image and back.
Eigen::MatrixXd to_matrix(const Image& image);
Image to_image(const Eigen::MatrixXd& pixels, std::size_t side);

}  // namespace spi
