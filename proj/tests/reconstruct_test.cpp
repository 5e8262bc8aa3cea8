#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spi/block_system.hpp"
#include "spi/error.hpp"
#include "spi/metrics.hpp"
#include "spi/phantom.hpp"
#include "spi/reconstruct.hpp"
#include "spi/tv.hpp"

namespace spi {
namespace {

using testing::random_image;

BlockSystem measure(const Image& x, std::size_t block_side, std::size_t m, std::uint64_t seed,
                    const SamplingWeight* weight = nullptr) {
  const BlockGrid grid(x.side(), block_side);
  BlockSystem system(grid, x.channels(), m);
  const auto w = weight ? *weight : SamplingWeight::ones(x.pixels());
  const PatternSource source{seed, PatternMode::Gaussian, 0.5};
  for (std::size_t i = 1; i <= m; ++i) {
    const auto pattern = synthesize_pattern(w, grid, source, i);
    system.append(pattern, forward(pattern, x, grid));
  }
  return system;
}

double max_abs_diff(const Image& a, const Image& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.samples().size(); ++k)
    worst = std::max(worst, std::abs(a.samples()[k] - b.samples()[k]));
  return worst;
}

TEST(Tv, ConstantImageIsZero) {
  const Image img(16, 2, 0.37);
  EXPECT_EQ(tv(img, TvFlavor::Anisotropic), 0.0);
  EXPECT_EQ(tv(img, TvFlavor::Isotropic), 0.0);
}

TEST(Tv, VerticalStepCostsOneRow) {
  Image img(16, 1, 0.0);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 8; c < 16; ++c) img.at(r, c) = 1.0;
  EXPECT_DOUBLE_EQ(tv(img, TvFlavor::Anisotropic), 16.0);
  EXPECT_DOUBLE_EQ(tv(img, TvFlavor::Isotropic), 16.0);
}

TEST(Tv, MatchesNaiveOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Image img = random_image(13, 1 + seed % 3, seed);
    EXPECT_NEAR(tv(img, TvFlavor::Anisotropic), testing::naive_tv(img, false), 1e-12);
    EXPECT_NEAR(tv(img, TvFlavor::Isotropic), testing::naive_tv(img, true), 1e-12);
  }
}

TEST(Tv, AdjointIdentity) {
  const std::size_t side = 11, n = side * side;
  const auto x = testing::random_vector(n, 1);
  const auto a = testing::random_vector(n, 2);
  const auto b = testing::random_vector(n, 3);
  std::vector<double> gh(n), gv(n), dt(n);
  gradient(x, side, gh, gv);
  gradient_adjoint(a, b, side, dt);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    lhs += gh[k] * a[k] + gv[k] * b[k];
    rhs += x[k] * dt[k];
  }
  EXPECT_NEAR(lhs, rhs, 1e-10);
}

TEST(BlockLsq, ExactWhenDetermined) {
  const Image x = random_image(16, 1, 4);
  const auto system = measure(x, 4, 16, 9);
  EXPECT_LT(max_abs_diff(solve_block_lsq(system, 16).estimate, x), 1e-8);
}

TEST(BlockLsq, SingleAcquisitionFitsData) {
  const Image x = random_image(16, 1, 5);
  const auto system = measure(x, 4, 1, 9);
  const auto r = solve_block_lsq(system, 1);
  EXPECT_LT(r.solution_residual, 1e-9);
}

TEST(AdmmTv, LambdaZeroDeterminedMatchesDirectSolve) {
  const Image x = random_image(16, 1, 6);
  const auto system = measure(x, 4, 16, 3);
  AdmmTvParams params;
  params.lambda = 0.0;
  const auto r = solve_admm_tv(system, 16, params);
  const auto& grid = system.grid();
  for (std::size_t j = 0; j < grid.block_count(); ++j) {
    const Eigen::MatrixXd a = system.rows(j, 16);
    const Eigen::VectorXd y = system.measurements(j, 16).col(0);
    const Eigen::VectorXd direct = testing::direct_solve(a, y);
    const auto pixels = grid.block_pixel_indices(j);
    for (std::size_t k = 0; k < pixels.size(); ++k)
      EXPECT_NEAR(r.estimate.plane(0)[pixels[k]], direct[static_cast<Eigen::Index>(k)], 1e-6);
  }
  EXPECT_LT(max_abs_diff(r.estimate, solve_block_lsq(system, 16).estimate), 1e-6);
}

TEST(AdmmTv, RecoversConstantImage) {
  const Image x(32, 1, 0.6);
  const auto system = measure(x, 8, 16, 1);
  const auto r = solve_admm_tv(system, 16, AdmmTvParams{});
  EXPECT_LT(max_abs_diff(r.estimate, x), 1e-2);
}

TEST(AdmmTv, PhantomAtHalfRateBeatsLeastSquares) {
  const Scene scene = make_phantom(64, 7);
  const auto system = measure(scene.image, 8, 32, 2);
  const auto tv_result = solve_admm_tv(system, 32, AdmmTvParams{});
  const auto lsq_result = solve_block_lsq(system, 32);
  const double tv_psnr = psnr_masked(scene.image, tv_result.estimate, {});
  const double lsq_psnr = psnr_masked(scene.image, lsq_result.estimate, {});
  EXPECT_GE(tv_psnr, 30.0);
  EXPECT_GT(tv_psnr, lsq_psnr);
}

TEST(AdmmTv, ZeroPatternGivesZeroImage) {
  const Image x = random_image(16, 1, 2);
  SamplingWeight zero{std::vector<double>(x.pixels(), 0.0), 1};
  const auto system = measure(x, 4, 8, 4, &zero);
  const auto r = solve_admm_tv(system, 8, AdmmTvParams{});
  EXPECT_LT(max_abs_diff(r.estimate, Image(16, 1, 0.0)), 1e-12);
}

TEST(AdmmTv, ConvergenceFlagImpliesToleranceMet) {
  const Scene scene = make_phantom(32, 3);
  const auto system = measure(scene.image, 8, 24, 5);
  AdmmTvParams params;
  params.tolerance = 1e-3;
  const auto r = solve_admm_tv(system, 24, params);
  if (r.converged) {
    EXPECT_LE(r.primal_residual, params.tolerance);
    EXPECT_LE(r.dual_residual, params.tolerance);
  }
  EXPECT_LE(r.iterations, params.max_iterations);
  EXPECT_EQ(r.primal_trace.size(), r.iterations);
  EXPECT_LE(r.data_residual, r.data_residual_bound + 1e-9);
}

TEST(AdmmTv, RgbChannelsSolvedTogether) {
  const Scene scene = make_phantom(32, 4, 3);
  const auto system = measure(scene.image, 8, 40, 6);
  const auto r = solve_admm_tv(system, 40, AdmmTvParams{});
  EXPECT_EQ(r.estimate.channels(), 3u);
  EXPECT_GE(psnr_masked(scene.image, r.estimate, {}), 25.0);
}

// More acquisitions should not make things worse; checked with a sign test
// over independent scenes and pattern seeds.
TEST(AdmmTv, QualityImprovesWithAcquisitions) {
  int improved = 0;
  const int trials = 20;
  for (int s = 0; s < trials; ++s) {
    const Scene scene = make_phantom(32, 100 + s);
    const auto system = measure(scene.image, 8, 40, 200 + s);
    AdmmTvParams params;
    params.max_iterations = 100;
    const double few = mse(scene.image, solve_admm_tv(system, 10, params).estimate);
    const double many = mse(scene.image, solve_admm_tv(system, 40, params).estimate);
    improved += many < few;
  }
  EXPECT_LT(testing::sign_test_p(trials, improved), 0.05) << improved << "/" << trials;
}

TEST(Reconstruct, InvalidUptoIsRejected) {
  const Image x = random_image(16, 1, 1);
  const auto system = measure(x, 4, 4, 1);
  EXPECT_THROW(solve_admm_tv(system, 0, AdmmTvParams{}), Error);
  EXPECT_THROW(solve_admm_tv(system, 5, AdmmTvParams{}), Error);
  EXPECT_THROW(solve_block_lsq(system, 5), Error);
}

}  // namespace
}  // namespace spi
