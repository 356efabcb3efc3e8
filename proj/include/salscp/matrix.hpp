#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace salscp {

/// Dense row-major matrix of doubles. Holds factor matrices, Gram matrices
/// and unfoldings. An empty (0 x 0) matrix is only produced by default
/// construction.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of row-major `values`; rejects wrong lengths and
  /// non-finite entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Coordinate-format matrix; produced by unfolding a sparse tensor.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_index;
  std::vector<std::size_t> col_index;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  Matrix to_dense() const;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix multiply(const SparseMatrix& a, const Matrix& b);
/// A^T A.
Matrix gram(const Matrix& a);
/// A^T B.
Matrix cross_gram(const Matrix& a, const Matrix& b);
/// (1 - alpha) * a + alpha * b, written into a.
void relax_into(Matrix& a, const Matrix& b, double alpha);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace salscp
