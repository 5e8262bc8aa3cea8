#pragma once

#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include "spi/bounding_box.hpp"
#include "spi/config.hpp"
#include "spi/image.hpp"
#include "spi/pattern.hpp"
#include "spi/rng.hpp"

namespace spi {

/// Maps a provisional reconstruction to the sampling weight used for the next
/// acquisitions. Implementations are stateless: the output depends only on the
/// arguments and the generator's own parameters, and always lies in [0,1].
class MaskGenerator {
public:
  virtual ~MaskGenerator() = default;
  virtual SamplingWeight generate(const Image& provisional, std::size_t acquisition,
                                  const RngStream& stream) const = 0;
  virtual std::string_view name() const = 0;
};

struct OracleMaskParams {
  std::vector<BoundingBox> boxes;
  double dilation = 2.0;
  double softness = 2.0;
  double jitter_base = 4.0;
  double feedback_base = 4.0;

  /// Corner jitter std at acquisition i: max(0, jitter_base - log_K(i)).
  double jitter_std(std::size_t acquisition) const;
};

/// Turns a region core into a weight: 0 within Chebyshev distance `dilation`
/// of the core, then a linear ramp reaching 1 after `softness` more pixels.
SamplingWeight weight_from_core(const std::vector<bool>& core, std::size_t side, double dilation,
                                double softness);

/// Exact Chebyshev distance from every pixel to the nearest core pixel
/// (0 on the core; a large sentinel when the core is empty).
std::vector<double> chebyshev_distance(const std::vector<bool>& core, std::size_t side);

SamplingWeight passthrough_mask(const Image& provisional, std::size_t acquisition);

/// Ground-truth stand-in for a learned generator: zeroes the (jittered,
/// dilated) boxes. Jitter is drawn from `stream`, four normals per box in
/// x0, y0, x1, y1 order, and corners are rounded to whole pixels.
SamplingWeight oracle_mask(const Image& provisional, std::size_t acquisition,
                           const OracleMaskParams& params, const RngStream& stream);

/// Detects cells of the provisional image (luminance) whose mean falls in
/// [mean_lo, mean_hi] and whose std is at most max_std, and masks them with the
/// same dilation and softness handling as oracle_mask.
SamplingWeight silhouette_mask(const Image& provisional, std::size_t acquisition,
                               const MaskParams& params);

class PassthroughMask final : public MaskGenerator {
public:
  SamplingWeight generate(const Image& provisional, std::size_t acquisition,
                          const RngStream&) const override {
    return passthrough_mask(provisional, acquisition);
  }
  std::string_view name() const override { return "passthrough"; }
};

class OracleMask final : public MaskGenerator {
public:
  explicit OracleMask(OracleMaskParams params) : params_(std::move(params)) {}
  SamplingWeight generate(const Image& provisional, std::size_t acquisition,
                          const RngStream& stream) const override {
    return oracle_mask(provisional, acquisition, params_, stream);
  }
  std::string_view name() const override { return "oracle"; }
  const OracleMaskParams& params() const { return params_; }

private:
  OracleMaskParams params_;
};

class SilhouetteMask final : public MaskGenerator {
public:
  explicit SilhouetteMask(MaskParams params) : params_(params) {}
  SamplingWeight generate(const Image& provisional, std::size_t acquisition,
                          const RngStream&) const override {
    return silhouette_mask(provisional, acquisition, params_);
  }
  std::string_view name() const override { return "silhouette"; }

private:
  MaskParams params_;
};

/// Builds the generator selected by config.mask.kind. Boxes are only used by
/// the oracle and must lie inside the image.
std::unique_ptr<MaskGenerator> make_mask_generator(const CaptureConfig& config,
                                                   const std::vector<BoundingBox>& boxes);

}  // namespace spi
