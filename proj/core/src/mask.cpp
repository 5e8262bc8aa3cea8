#include "spi/mask.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spi {

double OracleMaskParams::jitter_std(std::size_t acquisition) const {
  const double decay = std::log(static_cast<double>(std::max<std::size_t>(acquisition, 1))) /
                       std::log(feedback_base);
  return std::max(0.0, jitter_base - decay);
}

std::vector<double> chebyshev_distance(const std::vector<bool>& core, std::size_t side) {
  const double far = static_cast<double>(4 * side + 4);
  std::vector<double> d(side * side);
  for (std::size_t p = 0; p < d.size(); ++p) d[p] = core[p] ? 0.0 : far;
  const auto idx = [side](std::size_t r, std::size_t c) { return r * side + c; };
  // Two-pass chamfer with unit weights on all 8 neighbours gives the exact
  // chessboard distance.
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      double& v = d[idx(r, c)];
      if (c > 0) v = std::min(v, d[idx(r, c - 1)] + 1);
      if (r > 0) {
        v = std::min(v, d[idx(r - 1, c)] + 1);
        if (c > 0) v = std::min(v, d[idx(r - 1, c - 1)] + 1);
        if (c + 1 < side) v = std::min(v, d[idx(r - 1, c + 1)] + 1);
      }
    }
  for (std::size_t r = side; r-- > 0;)
    for (std::size_t c = side; c-- > 0;) {
      double& v = d[idx(r, c)];
      if (c + 1 < side) v = std::min(v, d[idx(r, c + 1)] + 1);
      if (r + 1 < side) {
        v = std::min(v, d[idx(r + 1, c)] + 1);
        if (c + 1 < side) v = std::min(v, d[idx(r + 1, c + 1)] + 1);
        if (c > 0) v = std::min(v, d[idx(r + 1, c - 1)] + 1);
      }
    }
  return d;
}

SamplingWeight weight_from_core(const std::vector<bool>& core, std::size_t side, double dilation,
                                double softness) {
  const auto dist = chebyshev_distance(core, side);
  SamplingWeight w{std::vector<double>(side * side, 1.0), 0};
  for (std::size_t p = 0; p < dist.size(); ++p) {
    if (dist[p] <= dilation) w.values[p] = 0.0;
    else w.values[p] = std::min(1.0, (dist[p] - dilation) / (softness + 1.0));
  }
  return w;
}

SamplingWeight passthrough_mask(const Image& provisional, std::size_t acquisition) {
  return {std::vector<double>(provisional.pixels(), 1.0), acquisition};
}

SamplingWeight oracle_mask(const Image& provisional, std::size_t acquisition,
                           const OracleMaskParams& params, const RngStream& stream) {
  const std::size_t side = provisional.side();
  const long s = static_cast<long>(side);
  if (params.boxes.empty()) return passthrough_mask(provisional, acquisition);

  const double sigma = params.jitter_std(acquisition);
  RngReader rng(stream);
  std::vector<BoundingBox> jittered;
  for (const auto& box : params.boxes) {
    double corners[4] = {static_cast<double>(box.x0), static_cast<double>(box.y0),
                         static_cast<double>(box.x1), static_cast<double>(box.y1)};
    for (double& v : corners) v += sigma * rng.normal();
    BoundingBox b;
    b.x0 = std::clamp(std::lround(corners[0]), 0L, s - 1);
    b.y0 = std::clamp(std::lround(corners[1]), 0L, s - 1);
    b.x1 = std::clamp(std::lround(corners[2]), b.x0 + 1, s);
    b.y1 = std::clamp(std::lround(corners[3]), b.y0 + 1, s);
    jittered.push_back(b);
  }
  auto w = weight_from_core(box_union_mask(jittered, side), side, params.dilation, params.softness);
  w.source = acquisition;
  return w;
}

SamplingWeight silhouette_mask(const Image& provisional, std::size_t acquisition,
                               const MaskParams& params) {
  const Image luma = to_luminance(provisional);
  const std::size_t side = luma.side();
  const std::size_t cell = std::max<std::size_t>(params.cell, 1);
  std::vector<bool> core(side * side, false);
  bool any = false;
  for (std::size_t r0 = 0; r0 < side; r0 += cell)
    for (std::size_t c0 = 0; c0 < side; c0 += cell) {
      const std::size_t r1 = std::min(side, r0 + cell), c1 = std::min(side, c0 + cell);
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) {
          const double v = luma.at(r, c);
          sum += v;
          sum_sq += v * v;
        }
      const double count = static_cast<double>((r1 - r0) * (c1 - c0));
      const double mean = sum / count;
      const double stddev = std::sqrt(std::max(0.0, sum_sq / count - mean * mean));
      if (mean < params.mean_lo || mean > params.mean_hi || stddev > params.max_std) continue;
      any = true;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) core[r * side + c] = true;
    }
  if (!any) return passthrough_mask(provisional, acquisition);
  auto w = weight_from_core(core, side, params.dilation, params.softness);
  w.source = acquisition;
  return w;
}

std::unique_ptr<MaskGenerator> make_mask_generator(const CaptureConfig& config,
                                                   const std::vector<BoundingBox>& boxes) {
  switch (config.mask.kind) {
    case MaskKind::Oracle: {
      for (const auto& b : boxes) b.validate(config.image_size);
      return std::make_unique<OracleMask>(OracleMaskParams{
          boxes, config.mask.dilation, config.mask.softness, config.mask.jitter_base,
          config.feedback_base});
    }
    case MaskKind::Silhouette: return std::make_unique<SilhouetteMask>(config.mask);
    case MaskKind::Passthrough: break;
  }
  return std::make_unique<PassthroughMask>();
}

}  // namespace spi
