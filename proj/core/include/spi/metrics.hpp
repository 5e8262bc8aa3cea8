#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "spi/bounding_box.hpp"
#include "spi/image.hpp"

namespace spi {

/// Mean squared error over every sample.
double mse(const Image& reference, const Image& estimate);

/// PSNR in dB (peak 1.0) over the pixels outside all boxes, every channel.
/// Returns +infinity when those pixels are identical. Throws a config error if
/// the boxes cover the whole image and a dimension error on shape mismatch.
double psnr_masked(const Image& reference, const Image& estimate,
                   const std::vector<BoundingBox>& exclude);

/// Mean squared error over the union of box pixels, every channel. Throws a
/// config error for an empty box list or out-of-bounds boxes.
double region_mse(const Image& reference, const Image& estimate,
                  const std::vector<BoundingBox>& boxes);

/// Modified leaky ReLU applied to a feature distance d:
/// -(d - 1.1) for d < 1.1, otherwise -0.01 (d - 1.1).
double anonymity_adjustment(double distance);

/// Normalized 1-D Gaussian of odd length `size`.
std::vector<double> gaussian_kernel_1d(std::size_t size, double sigma);

inline constexpr std::size_t kDefocusKernelSize = 31;
inline constexpr double kDefocusSigma = 16.0;

/// 31 x 31 row-major kernel, outer product of the 1-D kernel (sigma = 16).
std::vector<double> defocus_kernel();

/// Separable convolution with defocus_kernel(), mirrored borders that do not
/// repeat the edge sample (dcb|abcd|cba). Throws a config error if the image is
/// smaller than the kernel.
Image defocus_baseline(const Image& x);

struct EvalRow {
  std::string method;
  double psnr_outside_db = 0.0;  // +inf when identical outside the boxes
  double mse_inside = 0.0;
  double mse_overall = 0.0;
  /// alpha * mse_overall + (1 - alpha) * (-mse_inside)
  double combined = 0.0;
};

struct EvalReport {
  double alpha = 0.999;
  std::vector<EvalRow> rows;
};

EvalRow evaluate_one(const Image& original, const std::string& method, const Image& candidate,
                     const std::vector<BoundingBox>& boxes, double alpha = 0.999);
EvalReport evaluate(const Image& original,
                    const std::vector<std::pair<std::string, Image>>& candidates,
                    const std::vector<BoundingBox>& boxes, double alpha = 0.999);

/// JSON document; infinite PSNR is written as the string "inf".
std::string report_to_json(const EvalReport& report);
/// Comma-separated table with a header row.
std::string report_to_csv(const EvalReport& report);

}  // namespace spi
