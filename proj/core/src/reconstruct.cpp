#include "spi/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spi/error.hpp"
#include "spi/tv.hpp"

namespace spi {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::span<double> span_of(VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> span_of(const VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Stacked gradient of every channel: rows [0, N) horizontal, [N, 2N) vertical.
MatrixXd apply_gradient(const MatrixXd& x, std::size_t side) {
  const Index n = x.rows();
  MatrixXd g(2 * n, x.cols());
  VectorXd col(n), gh(n), gv(n);
  for (Index c = 0; c < x.cols(); ++c) {
    col = x.col(c);
    gradient(span_of(col), side, span_of(gh), span_of(gv));
    g.col(c).head(n) = gh;
    g.col(c).tail(n) = gv;
  }
  return g;
}

MatrixXd apply_gradient_adjoint(const MatrixXd& g, std::size_t side) {
  const Index n = g.rows() / 2;
  MatrixXd out(n, g.cols());
  VectorXd gh(n), gv(n), col(n);
  for (Index c = 0; c < g.cols(); ++c) {
    gh = g.col(c).head(n);
    gv = g.col(c).tail(n);
    gradient_adjoint(span_of(gh), span_of(gv), side, span_of(col));
    out.col(c) = col;
  }
  return out;
}

/// Solves (I + D^T D) x = b for one channel, warm-started from x.
void solve_smoothing_system(const VectorXd& b, std::size_t side, VectorXd& x) {
  const Index n = b.size();
  VectorXd gh(n), gv(n), dtd(n);
  const auto apply = [&](const VectorXd& v, VectorXd& out) {
    gradient(span_of(v), side, span_of(gh), span_of(gv));
    gradient_adjoint(span_of(gh), span_of(gv), side, span_of(dtd));
    out = v + dtd;
  };
  VectorXd r(n), q(n);
  apply(x, q);
  r = b - q;
  VectorXd d = r;
  double rr = r.squaredNorm();
  const double stop = 1e-24 * std::max(1.0, b.squaredNorm());
  // I + D^T D has spectrum in [1, 9], so CG contracts by at least 1/2 per step.
  for (int it = 0; it < 200 && rr > stop; ++it) {
    apply(d, q);
    const double alpha = rr / d.dot(q);
    x += alpha * d;
    r -= alpha * q;
    const double rr_next = r.squaredNorm();
    d = r + (rr_next / rr) * d;
    rr = rr_next;
  }
}

void shrink(MatrixXd& z, double threshold, TvFlavor flavor) {
  const Index n = z.rows() / 2;
  for (Index c = 0; c < z.cols(); ++c) {
    if (flavor == TvFlavor::Anisotropic) {
      for (Index k = 0; k < z.rows(); ++k) {
        const double v = z(k, c);
        z(k, c) = std::copysign(std::max(std::abs(v) - threshold, 0.0), v);
      }
    } else {
      for (Index p = 0; p < n; ++p) {
        const double mag = std::hypot(z(p, c), z(p + n, c));
        const double scale = mag > threshold ? 1.0 - threshold / mag : 0.0;
        z(p, c) *= scale;
        z(p + n, c) *= scale;
      }
    }
  }
}

double total_variation(const MatrixXd& x, std::size_t side, TvFlavor flavor) {
  double sum = 0.0;
  VectorXd col;
  for (Index c = 0; c < x.cols(); ++c) {
    col = x.col(c);
    sum += tv(span_of(col), side, flavor);
  }
  return sum;
}

/// Proximal step of the data term, block by block:
/// p_j = argmin ||Phi_j p - y_j||^2 + rho/2 ||p - v_j||^2
///     = (2 Phi_j^T Phi_j + rho I)^{-1} (2 Phi_j^T y_j + rho v_j).
/// With fewer rows than pixels the inverse goes through the m x m system
/// rho/2 I + Phi_j Phi_j^T (Woodbury identity).
class DataProx {
public:
  DataProx(const BlockSystem& system, std::size_t upto) : system_(system), upto_(upto) {
    const std::size_t blocks = system.grid().block_count();
    rhs_.reserve(blocks);
    for (std::size_t j = 0; j < blocks; ++j)
      rhs_.push_back(2.0 * system.rows(j, upto).transpose() * system.measurements(j, upto));
    factors_.resize(blocks);
  }

  void factorize(double rho) {
    rho_ = rho;
    const auto n = static_cast<Index>(system_.grid().block_pixels());
    const auto m = static_cast<Index>(upto_);
    primal_ = m >= n;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      const auto a = system_.rows(j, upto_);
      if (primal_) {
        MatrixXd g = 2.0 * a.transpose() * a;
        g.diagonal().array() += rho;
        factors_[j].compute(g);
      } else {
        MatrixXd s = a * a.transpose();
        s.diagonal().array() += 0.5 * rho;
        factors_[j].compute(s);
      }
    }
  }

  void apply(const MatrixXd& v, MatrixXd& p) const {
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      MatrixXd w = rhs_[j] + rho_ * system_.gather(v, j);
      if (primal_) {
        w = factors_[j].solve(w);
      } else {
        const auto a = system_.rows(j, upto_);
        w = (w - a.transpose() * factors_[j].solve(a * w)) / rho_;
      }
      system_.scatter(w, j, p);
    }
  }

private:
  const BlockSystem& system_;
  std::size_t upto_;
  double rho_ = 1.0;
  bool primal_ = true;
  std::vector<MatrixXd> rhs_;
  std::vector<Eigen::LLT<MatrixXd>> factors_;
};

MatrixXd least_norm(const BlockSystem& system, std::size_t upto) {
  const auto& grid = system.grid();
  MatrixXd x = MatrixXd::Zero(static_cast<Index>(grid.pixels()),
                              static_cast<Index>(system.channels()));
  for (std::size_t j = 0; j < grid.block_count(); ++j) {
    const MatrixXd a = system.rows(j, upto);
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(a);
    const MatrixXd xj = cod.solve(MatrixXd(system.measurements(j, upto)));
    system.scatter(xj, j, x);
  }
  return x;
}

void check_upto(const BlockSystem& system, std::size_t upto) {
  if (upto < 1 || upto > system.acquisitions())
    fail(ErrorKind::Config, "acquisition index " + std::to_string(upto) + " outside [1, " +
                                std::to_string(system.acquisitions()) + "]");
}

double frobenius(const BlockSystem& system, std::size_t upto) {
  double sum = 0.0;
  for (std::size_t j = 0; j < system.grid().block_count(); ++j)
    sum += system.rows(j, upto).squaredNorm();
  return std::sqrt(sum);
}

void finish(ReconstructionResult& result, const BlockSystem& system, std::size_t upto,
            const MatrixXd& x, const MatrixXd& p) {
  const std::size_t side = system.grid().side();
  result.solution_residual = system.misfit(x, upto);
  result.estimate = to_image(x, side);
  result.estimate.clamp();
  const MatrixXd clamped = to_matrix(result.estimate);
  result.data_residual = system.misfit(clamped, upto);
  result.data_residual_bound =
      system.misfit(p, upto) + frobenius(system, upto) * (clamped - p).norm();
}

}  // namespace

ReconstructionResult solve_block_lsq(const BlockSystem& system, std::size_t upto) {
  check_upto(system, upto);
  const MatrixXd x = least_norm(system, upto);
  ReconstructionResult result;
  result.converged = true;
  const double misfit = system.misfit(x, upto);
  result.objective_trace = {misfit * misfit};
  result.primal_trace = {0.0};
  result.dual_trace = {0.0};
  finish(result, system, upto, x, x);
  return result;
}

ReconstructionResult solve_admm_tv(const BlockSystem& system, std::size_t upto,
                                   const AdmmTvParams& params) {
  params.validate();
  check_upto(system, upto);
  const std::size_t side = system.grid().side();
  const double scale = std::sqrt(static_cast<double>(system.grid().pixels() * system.channels()));

  MatrixXd x = least_norm(system, upto);
  MatrixXd p = x;
  MatrixXd z = apply_gradient(x, side);
  MatrixXd u = MatrixXd::Zero(x.rows(), x.cols());
  MatrixXd v = MatrixXd::Zero(z.rows(), z.cols());

  double rho = params.rho;
  DataProx prox(system, upto);
  prox.factorize(rho);

  ReconstructionResult result;
  VectorXd col;
  for (std::size_t k = 1; k <= params.max_iterations; ++k) {
    const MatrixXd b = (p - u) + apply_gradient_adjoint(z - v, side);
    for (Index c = 0; c < x.cols(); ++c) {
      col = x.col(c);
      solve_smoothing_system(b.col(c), side, col);
      x.col(c) = col;
    }

    const MatrixXd p_old = p, z_old = z;
    prox.apply(x + u, p);
    const MatrixXd dx = apply_gradient(x, side);
    z = dx + v;
    shrink(z, params.lambda / rho, params.tv);

    u += x - p;
    v += dx - z;

    const double primal = std::sqrt((x - p).squaredNorm() + (dx - z).squaredNorm()) / scale;
    const double dual = rho * ((p - p_old) + apply_gradient_adjoint(z - z_old, side)).norm() / scale;
    const double misfit = system.misfit(x, upto);
    result.objective_trace.push_back(misfit * misfit +
                                     params.lambda * total_variation(x, side, params.tv));
    result.primal_trace.push_back(primal);
    result.dual_trace.push_back(dual);
    result.iterations = k;
    result.primal_residual = primal;
    result.dual_residual = dual;
    if (primal <= params.tolerance && dual <= params.tolerance) {
      result.converged = true;
      break;
    }

    if (k % 10 == 0) {
      double factor = 1.0;
      if (primal > 10.0 * dual) factor = 2.0;
      else if (dual > 10.0 * primal) factor = 0.5;
      const double next = rho * factor;
      if (factor != 1.0 && next >= params.rho * 1e-4 && next <= params.rho * 1e4) {
        rho = next;
        u /= factor;
        v /= factor;
        prox.factorize(rho);
      }
    }
  }
  result.final_rho = rho;
  finish(result, system, upto, x, p);
  return result;
}

ReconstructionResult reconstruct_admm_tv(const MeasurementBundle& bundle, std::size_t upto,
                                         const AdmmTvParams& params) {
  return solve_admm_tv(BlockSystem::from_bundle(bundle, upto), upto, params);
}

ReconstructionResult reconstruct_block_lsq(const MeasurementBundle& bundle, std::size_t upto) {
  return solve_block_lsq(BlockSystem::from_bundle(bundle, upto), upto);
}

}  // namespace spi
