#pragma once

#include <cstddef>
#include <span>

#include "salscp/matrix.hpp"
#include "salscp/tensor.hpp"

namespace salscp {

/// sqrt of the sum of squared entries.
double frobenius_norm(const Matrix& a);
double frobenius_norm(const DenseTensor& t);
double frobenius_norm(const SparseTensor& t);
double frobenius_norm(const Tensor& t);

double squared_norm(const Matrix& a);
double squared_norm(const Tensor& t);

/// ||a - b||^2 where b is dense; a may be sparse.
double squared_distance(const Tensor& a, const DenseTensor& b);

/// Mode-`mode` unfolding X_(mode), n_mode x (N / n_mode). Column index of
/// entry (i_0..i_{p-1}) is sum_{k != mode} i_k * prod_{m < k, m != mode} n_m.
Matrix unfold(const DenseTensor& t, std::size_t mode);
SparseMatrix unfold(const SparseTensor& t, std::size_t mode);

/// Columnwise Kronecker product; row index of (a_row, b_row) is a_row * n_b + b_row.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

Matrix hadamard(const Matrix& a, const Matrix& b);
void hadamard_inplace(Matrix& a, const Matrix& b);

/// X_(mode) * Theta_mode with Theta_mode = A_{p-1} (.) ... (.) A_{mode+1} (.)
/// A_{mode-1} (.) ... (.) A_0, computed without forming Theta. The sparse
/// overload touches stored entries only.
Matrix mttkrp(const DenseTensor& t, std::span<const Matrix> factors, std::size_t mode);
Matrix mttkrp(const SparseTensor& t, std::span<const Matrix> factors, std::size_t mode);
Matrix mttkrp(const Tensor& t, std::span<const Matrix> factors, std::size_t mode);

}  // namespace salscp
