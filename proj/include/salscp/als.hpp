#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "salscp/kruskal.hpp"
#include "salscp/tensor.hpp"
#include "salscp/trace.hpp"

namespace salscp {

struct AlsConfig {
  RegWeight lambda{1e-3};
  std::size_t max_sweeps = 100;
  /// Stop once max_i ||grad_block_i|| <= tol_grad after a sweep.
  double tol_grad = 1e-8;
  /// Seed for the default uniform [0, 1) initialization.
  std::uint64_t seed = 0;
  /// When false every trace row carries wall_ns = 0.
  bool record_wall_time = true;

  void validate() const;
};

/// Per-iterate residual hook (e.g. the exact residual of a known moment model).
using ResidualFn = std::function<double(const KruskalModel&)>;

struct AlsResult {
  KruskalModel model;
  std::vector<TraceRow> trace;
  bool converged = false;
};

/// Solves A (G + lambda I) = rhs for A, one Cholesky factorization of the
/// r x r kernel shared by all n_i rows. Throws NumericalError for non-finite
/// input or a failed factorization.
Matrix block_solve(const Matrix& rhs, const Matrix& gram, RegWeight w);

/// Replaces factor `mode` by the exact minimizer of f over that block.
void update_block(KruskalModel& m, const Tensor& x, RegWeight w, std::size_t mode);

/// One Gauss-Seidel pass over modes 0..p-1, each using the already updated
/// factors of earlier modes.
KruskalModel als_sweep(const KruskalModel& m, const Tensor& x, RegWeight w);

/// Sweeps until the gradient tolerance or the sweep cap. Without `init` the
/// model starts from random_model(shape, rank, cfg.seed).
AlsResult als_run(const Tensor& x, const AlsConfig& cfg, std::size_t rank,
                  const std::optional<KruskalModel>& init = std::nullopt, const ResidualFn& residual = {});

namespace detail {

/// Relaxed Gauss-Seidel pass: for each mode, A_i <- (1 - alpha) A_i + alpha A_hat_i
/// where A_hat_i is the exact block minimizer against `x`. alpha == 1 assigns
/// A_hat_i exactly. `after_mode` is invoked after each block update. Returns
/// the last mode's MTTKRP, which is computed from the final factors of all
/// other modes.
Matrix relaxed_sweep(KruskalModel& m, const Tensor& x, RegWeight w, double alpha,
                     const std::function<void(std::size_t)>& after_mode = {});

}  // namespace detail
}  // namespace salscp
