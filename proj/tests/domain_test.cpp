#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "spi/block_grid.hpp"
#include "spi/config.hpp"
#include "spi/error.hpp"
#include "spi/image.hpp"
#include "spi/rng.hpp"
#include "spi/schedule.hpp"

namespace spi {
namespace {

using Schedule = std::vector<std::size_t>;

TEST(BlockGrid, FullScaleCounts) {
  const BlockGrid g(256, 32);
  EXPECT_EQ(g.block_count(), 64u);
  EXPECT_EQ(g.block_pixels(), 1024u);
}

TEST(BlockGrid, SingleBlock) {
  const BlockGrid g(8, 8);
  EXPECT_EQ(g.block_count(), 1u);
  EXPECT_EQ(g.block_pixels(), 64u);
}

TEST(BlockGrid, DeskScaleCounts) {
  const BlockGrid g(64, 8);
  EXPECT_EQ(g.block_count(), 64u);
  EXPECT_EQ(g.block_pixels(), 64u);
}

TEST(BlockGrid, NonDivisibleIsConfigErrorNamingBoth) {
  try {
    BlockGrid(60, 8);
    FAIL() << "expected error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("60"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("8"), std::string::npos);
  }
}

TEST(BlockGrid, MappingIsABijectionAndRoundTrips) {
  for (auto [side, block] : {std::pair{64, 8}, std::pair{48, 16}, std::pair{12, 3}, std::pair{8, 8}}) {
    const BlockGrid g(side, block);
    std::set<std::size_t> seen;
    for (std::size_t j = 0; j < g.block_count(); ++j)
      for (std::size_t k = 0; k < g.block_pixels(); ++k) {
        const std::size_t p = g.pixel(j, k);
        EXPECT_TRUE(seen.insert(p).second);
        EXPECT_EQ(g.locate(p), (BlockLocation{j, k}));
      }
    EXPECT_EQ(seen.size(), g.pixels());
    for (std::size_t p = 0; p < g.pixels(); ++p) {
      const auto loc = g.locate(p);
      EXPECT_EQ(g.pixel(loc.block, loc.offset), p);
    }
  }
}

TEST(FeedbackSchedule, Base4Over512) {
  EXPECT_EQ(feedback_schedule(4, 512), (Schedule{1, 4, 16, 64, 256}));
  EXPECT_EQ(feedback_exponent_count(4, 512), 5u);
}

TEST(FeedbackSchedule, LargeBase) {
  EXPECT_EQ(feedback_schedule(16, 512), (Schedule{1, 16, 256}));
  EXPECT_EQ(feedback_exponent_count(16, 512), 3u);
}

TEST(FeedbackSchedule, UpperBoundIsExclusive) {
  EXPECT_EQ(feedback_schedule(2, 8), (Schedule{1, 2, 4}));
  EXPECT_EQ(feedback_schedule(2, 9), (Schedule{1, 2, 4, 8}));
  EXPECT_EQ(feedback_schedule(8, 512), (Schedule{1, 8, 64}));
}

TEST(FeedbackSchedule, FloorCollisionsAreDeduplicated) {
  const auto s = feedback_schedule(1.5, 512);
  EXPECT_EQ(s, (Schedule{1, 2, 3, 5, 7, 11, 17, 25, 38, 57, 86, 129, 194, 291, 437}));
  EXPECT_EQ(feedback_exponent_count(1.5, 512), 16u);
}

TEST(FeedbackSchedule, TableFiveCounts) {
  const std::vector<std::pair<double, std::size_t>> expected = {
      {1.5, 16}, {2, 9}, {4, 5}, {8, 3}, {16, 3}};
  for (auto [k, nf] : expected) EXPECT_EQ(feedback_exponent_count(k, 512), nf) << "K=" << k;
}

TEST(FeedbackSchedule, SingleAcquisitionHasNoFeedback) {
  EXPECT_TRUE(feedback_schedule(4, 1).empty());
}

TEST(FeedbackSchedule, RejectsBaseAtMostOne) {
  EXPECT_THROW(feedback_schedule(1.0, 10), Error);
  EXPECT_THROW(feedback_schedule(0.5, 10), Error);
  EXPECT_THROW(feedback_schedule(4, 0), Error);
}

TEST(FeedbackSchedule, PropertyStrictlyIncreasingFromOne) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> base(1.01, 20.0);
  std::uniform_int_distribution<std::size_t> count(2, 5000);
  for (int trial = 0; trial < 500; ++trial) {
    const double k = base(gen);
    const std::size_t m = count(gen);
    const auto s = feedback_schedule(k, m);
    ASSERT_FALSE(s.empty());
    EXPECT_EQ(s.front(), 1u);
    EXPECT_LT(s.back(), m);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
    EXPECT_LE(s.size(), feedback_exponent_count(k, m));
  }
}

// Known-answer vectors published with the Random123 library.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(DrawNormal, DeterministicPerStream) {
  const RngStream s{42, 3, 7, Purpose::Pattern};
  EXPECT_EQ(draw_normal(s, 1000), draw_normal(s, 1000));
}

TEST(DrawNormal, PrefixStable) {
  const RngStream s{42, 3, 7, Purpose::Pattern};
  const auto long_draw = draw_normal(s, 101);
  const auto short_draw = draw_normal(s, 37);
  EXPECT_TRUE(std::equal(short_draw.begin(), short_draw.end(), long_draw.begin()));
}

TEST(DrawNormal, DistinctStreamsDiffer) {
  const RngStream base{42, 3, 7, Purpose::Pattern};
  auto other = base;
  for (auto mutate : {+[](RngStream& s) { ++s.seed; }, +[](RngStream& s) { ++s.acquisition; },
                      +[](RngStream& s) { ++s.block; },
                      +[](RngStream& s) { s.purpose = Purpose::Noise; }}) {
    other = base;
    mutate(other);
    EXPECT_NE(draw_normal(base, 16), draw_normal(other, 16));
  }
}

TEST(DrawNormal, MomentsOverAMillionDraws) {
  const auto v = draw_normal({2024, 1, 0, Purpose::Test}, 1'000'000);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= v.size() - 1;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(DrawBits, FairAndBinary) {
  const auto bits = draw_bits({5, 1, 1, Purpose::PatternBits}, 100'000);
  double ones = 0.0;
  for (double b : bits) {
    ASSERT_TRUE(b == 0.0 || b == 1.0);
    ones += b;
  }
  EXPECT_NEAR(ones / bits.size(), 0.5, 0.01);
}

TEST(CaptureConfig, DerivedCounts) {
  const auto c = paper_scale();
  EXPECT_EQ(c.acquisitions(), 512u);
  EXPECT_EQ(c.block_count(), 64u);
  EXPECT_EQ(c.measurements(), 32768u);
  const auto d = desk_scale();
  EXPECT_EQ(d.acquisitions(), 32u);
}

TEST(CaptureConfig, TextRoundTrip) {
  CaptureConfig c;
  c.sampling_rate = 0.3;
  c.feedback_base = 1.5;
  c.pattern_mode = PatternMode::Binary;
  c.channel_mode = ChannelMode::Rgb;
  c.seed = 0xdeadbeefcafeULL;
  c.mask.kind = MaskKind::Silhouette;
  c.mask.mean_lo = 0.123456789012345;
  c.solver.tv = TvFlavor::Isotropic;
  c.solver.tolerance = 1e-7;
  EXPECT_EQ(parse_config(to_text(c)), c);
}

TEST(CaptureConfig, ParsesCommentsAndOverrides) {
  const auto c = parse_config("# desk run\nsampling_rate = 0.25  # quarter\n\nmask.kind=oracle\n");
  EXPECT_DOUBLE_EQ(c.sampling_rate, 0.25);
  EXPECT_EQ(c.mask.kind, MaskKind::Oracle);
  EXPECT_EQ(c.image_size, 64u);
}

TEST(CaptureConfig, UnknownKeyIsError) {
  try {
    parse_config("sampling_rat = 0.5\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("sampling_rat"), std::string::npos);
  }
}

TEST(CaptureConfig, BadValuesAreErrors) {
  EXPECT_THROW(parse_config("sampling_rate = half"), Error);
  EXPECT_THROW(parse_config("pattern_mode = ternary"), Error);
  EXPECT_THROW(parse_config("image_size = -3"), Error);
  EXPECT_THROW(parse_config("no equals sign"), Error);
}

TEST(CaptureConfig, ValidateRejectsInvalid) {
  auto bad = [](auto mutate) {
    CaptureConfig c;
    mutate(c);
    return c;
  };
  EXPECT_NO_THROW(CaptureConfig{}.validate());
  EXPECT_THROW(bad([](auto& c) { c.feedback_base = 1.0; }).validate(), Error);
  EXPECT_THROW(bad([](auto& c) { c.block_size = 7; }).validate(), Error);
  EXPECT_THROW(bad([](auto& c) { c.sampling_rate = 0.0; }).validate(), Error);
  EXPECT_THROW(bad([](auto& c) { c.sampling_rate = 1.5; }).validate(), Error);
  EXPECT_THROW(bad([](auto& c) { c.sampling_rate = 0.001; }).validate(), Error);
  EXPECT_THROW(bad([](auto& c) { c.solver.rho = 0.0; }).validate(), Error);
  EXPECT_THROW(bad([](auto& c) { c.mask.softness = -1.0; }).validate(), Error);
}

TEST(Image, RangeAndLuminance) {
  Image img(4, 3, 0.5);
  EXPECT_TRUE(img.in_range());
  img.at(1, 2, 0) = 1.5;
  EXPECT_FALSE(img.in_range());
  EXPECT_THROW(img.validate(), Error);
  img.clamp();
  EXPECT_TRUE(img.in_range());

  Image rgb(2, 3);
  rgb.at(0, 0, 0) = 1.0;
  rgb.at(0, 1, 1) = 1.0;
  rgb.at(1, 0, 2) = 1.0;
  const Image y = to_luminance(rgb);
  EXPECT_EQ(y.channels(), 1u);
  EXPECT_DOUBLE_EQ(y.at(0, 0), 0.299);
  EXPECT_DOUBLE_EQ(y.at(0, 1), 0.587);
  EXPECT_DOUBLE_EQ(y.at(1, 0), 0.114);
  EXPECT_DOUBLE_EQ(y.at(1, 1), 0.0);
}

}  // namespace
}  // namespace spi
