#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "salscp/matrix.hpp"
#include "salscp/shape.hpp"
#include "salscp/tensor.hpp"

namespace salscp {

/// Regularization weight lambda. Zero is admitted here for diagnostic
/// evaluation; solver entry points require lambda > 0.
struct RegWeight {
  double lambda = 0.0;

  RegWeight() = default;
  explicit RegWeight(double value);
  void require_positive() const;
};

/// CP model [[A_0, ..., A_{p-1}]] with factor i of size n_i x r.
class KruskalModel {
public:
  /// Shape and rank are inferred; factors must share a column count.
  explicit KruskalModel(std::vector<Matrix> factors);
  /// All-zero model.
  KruskalModel(const Shape& shape, std::size_t rank);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return rank_; }
  std::size_t order() const { return factors_.size(); }

  const Matrix& factor(std::size_t mode) const { return factors_.at(mode); }
  std::span<const Matrix> factors() const { return factors_; }
  /// Replaces factor `mode`; dimensions must match.
  void set_factor(std::size_t mode, Matrix a);

  /// ||x||^2 = sum_i ||A_i||^2.
  double squared_norm() const;

  friend bool operator==(const KruskalModel&, const KruskalModel&) = default;

private:
  Shape shape_;
  std::size_t rank_;
  std::vector<Matrix> factors_;
};

/// Entries i.i.d. uniform on [0, 1), filled factor by factor in mode order
/// (row-major within a factor) from a single seeded stream.
KruskalModel random_model(const Shape& shape, std::size_t rank, std::uint64_t seed);

/// Rows of A_{last} (.) ... (.) A_{first}: the first factor's row index varies
/// fastest, matching the dense layout and the unfolding column order.
Matrix khatri_rao_chain(std::span<const Matrix> factors);

DenseTensor reconstruct(const KruskalModel& m);

/// Theta_i^T Theta_i as the Hadamard product of the other modes' Gram
/// matrices; Theta_i is never formed.
Matrix gram_product(const KruskalModel& m, std::size_t mode);
/// Same, from precomputed per-mode Gram matrices A_j^T A_j.
Matrix gram_product(std::span<const Matrix> grams, std::size_t mode);

/// ||[[x]]||^2 via the Hadamard product of all Gram matrices.
double reconstruction_squared_norm(const KruskalModel& m);

/// <X, [[x]]>, touching only stored entries of a sparse X.
double inner_product(const Tensor& x, const KruskalModel& m);

/// ||X - [[x]]||^2. Dense X is evaluated entrywise (no cancellation); sparse X
/// through ||X||^2 - 2<X,[[x]]> + ||[[x]]||^2, clamped at zero.
double squared_residual(const Tensor& x, const KruskalModel& m);

/// f(x; X) = 1/2 ||X - [[x]]||^2 + lambda/2 ||x||^2.
double objective(const KruskalModel& m, const Tensor& x, RegWeight w);

/// Matricized block gradient -X_(i) Theta_i + A_i (Theta_i^T Theta_i + lambda I).
/// Column-wise vectorization gives the vectorized gradient.
Matrix grad_block(const KruskalModel& m, const Tensor& x, RegWeight w, std::size_t mode);

/// r x r kernel Theta_i^T Theta_i + lambda I of the block Hessian; the full
/// Hessian is this kernel Kronecker the n_i x n_i identity.
Matrix hessian_block(const KruskalModel& m, RegWeight w, std::size_t mode);

}  // namespace salscp
