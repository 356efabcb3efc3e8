#include "salscp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace salscp {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: value count does not match rows * cols");
  }
  if (!all_finite()) {
    throw std::invalid_argument("Matrix: non-finite entry");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw std::invalid_argument("Matrix: ragged initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite()) {
    throw std::invalid_argument("Matrix: non-finite entry");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix SparseMatrix::to_dense() const {
  Matrix out(rows, cols);
  for (std::size_t e = 0; e < values.size(); ++e) out(row_index[e], col_index[e]) += values[e];
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix multiply(const SparseMatrix& a, const Matrix& b) {
  if (a.cols != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
  Matrix c(a.rows, b.cols());
  for (std::size_t e = 0; e < a.nnz(); ++e) {
    auto ci = c.row(a.row_index[e]);
    auto bk = b.row(a.col_index[e]);
    for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += a.values[e] * bk[j];
  }
  return c;
}

Matrix gram(const Matrix& a) { return cross_gram(a, a); }

Matrix cross_gram(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("cross_gram: row counts differ");
  Matrix g(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    auto bi = b.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      auto gp = g.row(p);
      for (std::size_t q = 0; q < b.cols(); ++q) gp[q] += ai[p] * bi[q];
    }
  }
  return g;
}

void relax_into(Matrix& a, const Matrix& b, double alpha) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("relax_into: dimension mismatch");
  }
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t e = 0; e < av.size(); ++e) av[e] = (1.0 - alpha) * av[e] + alpha * bv[e];
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  }
  double m = 0.0;
  for (std::size_t e = 0; e < a.size(); ++e) m = std::max(m, std::abs(a.values()[e] - b.values()[e]));
  return m;
}

}  // namespace salscp
