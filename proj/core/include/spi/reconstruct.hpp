#pragma once

#include <cstddef>
#include <vector>

#include "spi/block_system.hpp"
#include "spi/bundle.hpp"
#include "spi/config.hpp"
#include "spi/image.hpp"

namespace spi {

struct ReconstructionResult {
  Image estimate;  // clamped to [0,1]
  std::size_t iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;  // per-pixel RMS of the consensus constraints
  double dual_residual = 0.0;
  double final_rho = 0.0;
  std::vector<double> objective_trace;
  std::vector<double> primal_trace;
  std::vector<double> dual_trace;
  /// ||Phi x - y|| for the solver's image before clamping.
  double solution_residual = 0.0;
  /// ||Phi x_hat - y|| for the returned (clamped) estimate.
  double data_residual = 0.0;
  /// Upper bound on data_residual derived from the solver state:
  /// ||Phi p - y|| + ||Phi||_F ||x_hat - p||, p being the data-consistent copy.
  double data_residual_bound = 0.0;
};

/// ADMM for  min_x  sum_j ||Phi_j x_j - y_j||^2 + lambda TV(x)  over the whole
/// image (TV couples neighbouring blocks). Splitting: p = x carries the data
/// term (per-block solve with 2 Phi_j^T Phi_j + rho I), z = D x carries the TV
/// term (shrinkage), and x solves (I + D^T D) x = (p - u) + D^T (z - v) by
/// conjugate gradients. Started from the per-block least-norm solution; rho is
/// rebalanced every 10 iterations when residuals differ by more than 10x.
ReconstructionResult solve_admm_tv(const BlockSystem& system, std::size_t upto,
                                   const AdmmTvParams& params);

/// Per-block minimum-norm least squares, no prior.
ReconstructionResult solve_block_lsq(const BlockSystem& system, std::size_t upto);

ReconstructionResult reconstruct_admm_tv(const MeasurementBundle& bundle, std::size_t upto,
                                         const AdmmTvParams& params);
ReconstructionResult reconstruct_block_lsq(const MeasurementBundle& bundle, std::size_t upto);

}  // namespace spi
