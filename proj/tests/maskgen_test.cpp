#include <gtest/gtest.h>

#include <algorithm>
#include <climits>

#include "oracles.hpp"
#include "spi/error.hpp"
#include "spi/mask.hpp"

namespace spi {
namespace {

using testing::random_image;

const RngStream kStream{1, 1, 0, Purpose::Jitter};

bool all_in_range(const SamplingWeight& w) {
  return std::all_of(w.values.begin(), w.values.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

OracleMaskParams hard(std::vector<BoundingBox> boxes, double dilation = 0.0) {
  return {std::move(boxes), dilation, 0.0, 0.0, 4.0};
}

TEST(PassthroughMask, AllOnes) {
  const auto w = passthrough_mask(random_image(32, 1, 1), 4);
  EXPECT_EQ(w.values, std::vector<double>(32 * 32, 1.0));
  EXPECT_TRUE(all_in_range(w));
}

TEST(OracleMask, HardBoxIsExactlyZero) {
  const auto w = oracle_mask(Image(32, 1), 1, hard({{8, 8, 16, 16, "t"}}), kStream);
  for (std::size_t r = 0; r < 32; ++r)
    for (std::size_t c = 0; c < 32; ++c) {
      const bool inside = r >= 8 && r < 16 && c >= 8 && c < 16;
      EXPECT_EQ(w.values[r * 32 + c], inside ? 0.0 : 1.0) << r << "," << c;
    }
}

TEST(OracleMask, EmptyBoxListIsAllOnes) {
  const auto w = oracle_mask(Image(16, 1), 1, hard({}), kStream);
  EXPECT_EQ(w.values, std::vector<double>(256, 1.0));
}

TEST(OracleMask, ZeroSetIsDilatedBoxExactly) {
  for (double dilation : {0.0, 1.0, 3.0}) {
    for (double softness : {0.0, 2.0}) {
      OracleMaskParams p = hard({{10, 5, 20, 12, "a"}, {2, 25, 6, 30, "b"}}, dilation);
      p.softness = softness;
      const auto w = oracle_mask(Image(32, 1), 16, p, kStream);
      const long d = static_cast<long>(dilation);
      for (long r = 0; r < 32; ++r)
        for (long c = 0; c < 32; ++c) {
          bool in = false;
          for (const auto& b : p.boxes)
            in = in || (c >= b.x0 - d && c < b.x1 + d && r >= b.y0 - d && r < b.y1 + d);
          EXPECT_EQ(w.values[r * 32 + c] == 0.0, in) << r << "," << c;
        }
    }
  }
}

TEST(OracleMask, SoftEdgeRampsLinearly) {
  OracleMaskParams p = hard({{10, 10, 20, 20, "t"}});
  p.softness = 2.0;
  const auto w = oracle_mask(Image(32, 1), 1, p, kStream);
  EXPECT_EQ(w.values[15 * 32 + 19], 0.0);
  EXPECT_NEAR(w.values[15 * 32 + 20], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w.values[15 * 32 + 21], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(w.values[15 * 32 + 22], 1.0);
  EXPECT_NEAR(w.values[9 * 32 + 9], 1.0 / 3.0, 1e-15);  // diagonal uses chessboard distance
}

TEST(OracleMask, JitterScheduleDecays) {
  OracleMaskParams p = hard({});
  p.jitter_base = 4.0;
  EXPECT_DOUBLE_EQ(p.jitter_std(1), 4.0);
  EXPECT_NEAR(p.jitter_std(4), 3.0, 1e-12);
  EXPECT_NEAR(p.jitter_std(16), 2.0, 1e-12);
  EXPECT_NEAR(p.jitter_std(256), 0.0, 1e-12);
  EXPECT_EQ(p.jitter_std(1024), 0.0);
}

// Monte Carlo over seeds: std 2 px at i = 1, 1 px at i = 4, 0 at i = 16.
TEST(OracleMask, CoverageOfTrueBoxImprovesWithAcquisitionIndex) {
  const BoundingBox truth{12, 12, 28, 28, "t"};
  OracleMaskParams p = hard({truth});
  p.jitter_base = 2.0;
  std::vector<double> mean_coverage;
  for (std::size_t i : {1u, 4u, 16u}) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto w = oracle_mask(Image(40, 1), i, p,
                                 {seed, static_cast<std::uint32_t>(i), 0, Purpose::Jitter});
      std::size_t covered = 0;
      for (long r = truth.y0; r < truth.y1; ++r)
        for (long c = truth.x0; c < truth.x1; ++c) covered += w.values[r * 40 + c] == 0.0;
      total += static_cast<double>(covered) / static_cast<double>(truth.area());
    }
    mean_coverage.push_back(total / 100.0);
  }
  EXPECT_LT(mean_coverage[0], mean_coverage[1]);
  EXPECT_LT(mean_coverage[1], mean_coverage[2]);
  EXPECT_EQ(mean_coverage[2], 1.0);
}

TEST(OracleMask, PureGivenStream) {
  OracleMaskParams p = hard({{3, 3, 12, 12, "t"}}, 1.0);
  p.jitter_base = 3.0;
  p.softness = 2.0;
  const RngStream s{9, 2, 0, Purpose::Jitter};
  EXPECT_EQ(oracle_mask(Image(16, 1), 2, p, s), oracle_mask(random_image(16, 1, 1), 2, p, s));
}

TEST(ChebyshevDistance, MatchesBruteForce) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t side = 17;
    std::vector<bool> core(side * side, false);
    for (int k = 0; k < 5; ++k) core[gen() % core.size()] = true;
    const auto d = chebyshev_distance(core, side);
    for (std::size_t p = 0; p < core.size(); ++p) {
      long best = LONG_MAX;
      for (std::size_t q = 0; q < core.size(); ++q)
        if (core[q])
          best = std::min(best, std::max(std::labs(static_cast<long>(p / side) - static_cast<long>(q / side)),
                                         std::labs(static_cast<long>(p % side) - static_cast<long>(q % side))));
      EXPECT_EQ(d[p], static_cast<double>(best));
    }
  }
}

Image disk_scene(std::size_t side, double cx, double cy, double radius) {
  Image img(side, 1, 0.1);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      const double dx = c + 0.5 - cx, dy = r + 0.5 - cy;
      if (dx * dx + dy * dy <= radius * radius) img.at(r, c) = 0.9;
    }
  return img;
}

TEST(SilhouetteMask, CoversBrightDisk) {
  MaskParams params;
  params.dilation = 4.0;
  params.softness = 2.0;
  const Image scene = disk_scene(64, 30.0, 34.0, 10.0);
  const auto w = silhouette_mask(scene, 1, params);
  std::size_t disk = 0, covered = 0;
  for (std::size_t p = 0; p < scene.pixels(); ++p)
    if (scene.plane(0)[p] == 0.9) {
      ++disk;
      covered += w.values[p] == 0.0;
    }
  EXPECT_GE(static_cast<double>(covered), 0.95 * static_cast<double>(disk));
  // Far corner stays fully sampled.
  EXPECT_EQ(w.values[0], 1.0);
  EXPECT_TRUE(all_in_range(w));
}

TEST(SilhouetteMask, FlatGrayHasNoDetections) {
  const auto w = silhouette_mask(Image(32, 1, 0.4), 1, MaskParams{});
  EXPECT_EQ(w.values, std::vector<double>(32 * 32, 1.0));
}

TEST(SilhouetteMask, Pure) {
  const Image scene = disk_scene(32, 16, 16, 6);
  EXPECT_EQ(silhouette_mask(scene, 4, MaskParams{}), silhouette_mask(scene, 4, MaskParams{}));
}

TEST(MaskGenerators, OutputsStayInUnitInterval) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Image img = random_image(32, trial % 2 ? 3 : 1, gen());
    OracleMaskParams p;
    p.boxes = {{static_cast<long>(gen() % 16), static_cast<long>(gen() % 16), 20, 24, "t"}};
    p.dilation = static_cast<double>(gen() % 4);
    p.softness = static_cast<double>(gen() % 4);
    p.jitter_base = 3.0;
    const std::size_t i = 1 + gen() % 64;
    EXPECT_TRUE(all_in_range(oracle_mask(img, i, p, {gen(), 1, 0, Purpose::Jitter})));
    MaskParams sp;
    sp.mean_lo = 0.3;
    sp.max_std = 0.5;
    EXPECT_TRUE(all_in_range(silhouette_mask(img, i, sp)));
  }
}

TEST(MakeMaskGenerator, SelectsByKind) {
  CaptureConfig c;
  EXPECT_EQ(make_mask_generator(c, {})->name(), "passthrough");
  c.mask.kind = MaskKind::Oracle;
  EXPECT_EQ(make_mask_generator(c, {{1, 1, 4, 4, "t"}})->name(), "oracle");
  EXPECT_THROW(make_mask_generator(c, {{1, 1, 100, 4, "t"}}), Error);
  c.mask.kind = MaskKind::Silhouette;
  EXPECT_EQ(make_mask_generator(c, {})->name(), "silhouette");
}

}  // namespace
}  // namespace spi
