#include "salscp/als.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "salscp/errors.hpp"
#include "salscp/kernels.hpp"

namespace salscp {

void AlsConfig::validate() const {
  lambda.require_positive();
  if (max_sweeps == 0) throw std::invalid_argument("AlsConfig: max_sweeps must be at least 1");
  if (!(tol_grad >= 0.0) || !std::isfinite(tol_grad)) throw std::invalid_argument("AlsConfig: tol_grad must be >= 0");
}

Matrix block_solve(const Matrix& rhs, const Matrix& gram, RegWeight w) {
  w.require_positive();
  const std::size_t r = gram.rows();
  if (gram.cols() != r || rhs.cols() != r) throw std::invalid_argument("block_solve: dimension mismatch");
  if (!rhs.all_finite() || !gram.all_finite()) throw NumericalError("block_solve: non-finite input");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor kernel = Eigen::Map<const RowMajor>(gram.values().data(), r, r);
  kernel.diagonal().array() += w.lambda;
  const Eigen::LLT<RowMajor> llt(kernel);
  if (llt.info() != Eigen::Success) throw NumericalError("block_solve: Cholesky factorization failed");

  // A K = B  <=>  K A^T = B^T since K is symmetric.
  Matrix out(rhs.rows(), r);
  Eigen::Map<RowMajor> a(out.values().data(), rhs.rows(), r);
  a = llt.solve(Eigen::Map<const RowMajor>(rhs.values().data(), rhs.rows(), r).transpose()).transpose();
  if (!out.all_finite()) throw NumericalError("block_solve: non-finite solution");
  return out;
}

namespace detail {

Matrix relaxed_sweep(KruskalModel& m, const Tensor& x, RegWeight w, double alpha,
                     const std::function<void(std::size_t)>& after_mode) {
  if (!(shape_of(x) == m.shape())) throw std::invalid_argument("sweep: tensor shape does not match model");
  std::vector<Matrix> grams;
  grams.reserve(m.order());
  for (const auto& a : m.factors()) grams.push_back(gram(a));

  Matrix proj;
  for (std::size_t mode = 0; mode < m.order(); ++mode) {
    proj = mttkrp(x, m.factors(), mode);
    Matrix a_hat = block_solve(proj, gram_product(grams, mode), w);
    if (alpha == 1.0) {
      m.set_factor(mode, std::move(a_hat));
    } else {
      Matrix a = m.factor(mode);
      relax_into(a, a_hat, alpha);
      m.set_factor(mode, std::move(a));
    }
    grams[mode] = gram(m.factor(mode));
    if (after_mode) after_mode(mode);
  }
  return proj;
}

}  // namespace detail

void update_block(KruskalModel& m, const Tensor& x, RegWeight w, std::size_t mode) {
  m.shape().check_mode(mode);
  const Matrix proj = mttkrp(x, m.factors(), mode);
  m.set_factor(mode, block_solve(proj, gram_product(m, mode), w));
}

KruskalModel als_sweep(const KruskalModel& m, const Tensor& x, RegWeight w) {
  KruskalModel out = m;
  detail::relaxed_sweep(out, x, w, 1.0);
  return out;
}

AlsResult als_run(const Tensor& x, const AlsConfig& cfg, std::size_t rank, const std::optional<KruskalModel>& init,
                  const ResidualFn& residual) {
  cfg.validate();
  KruskalModel model = init ? *init : random_model(shape_of(x), rank, cfg.seed);
  if (!(model.shape() == shape_of(x))) throw std::invalid_argument("als_run: initial model shape mismatch");
  if (model.rank() != rank) throw std::invalid_argument("als_run: initial model rank mismatch");

  const auto start = std::chrono::steady_clock::now();
  const std::size_t nnz = nnz_of(x);
  AlsResult result{model, {}, false};
  for (std::size_t k = 1; k <= cfg.max_sweeps; ++k) {
    detail::relaxed_sweep(model, x, cfg.lambda, 1.0);

    double grad_max = 0.0, grad_sq = 0.0;
    for (std::size_t mode = 0; mode < model.order(); ++mode) {
      const double g = frobenius_norm(grad_block(model, x, cfg.lambda, mode));
      grad_max = std::max(grad_max, g);
      grad_sq += g * g;
    }
    TraceRow row;
    row.k = k;
    row.alpha = 1.0;
    row.sampled_objective = objective(model, x, cfg.lambda);
    if (residual) row.exact_residual = residual(model);
    row.grad_norm = std::sqrt(grad_sq);
    row.batch_nnz = nnz;
    row.cumulative_cost_units = static_cast<double>(k) * static_cast<double>(nnz);
    if (cfg.record_wall_time) {
      row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    }
    result.trace.push_back(row);
    if (grad_max <= cfg.tol_grad) {
      result.converged = true;
      break;
    }
  }
  result.model = std::move(model);
  return result;
}

}  // namespace salscp
