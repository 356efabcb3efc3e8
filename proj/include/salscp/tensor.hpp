#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "salscp/shape.hpp"

namespace salscp {

/// Dense order-p tensor stored mode-0-fastest: entry (i_0, ..., i_{p-1}) lives
/// at i_0 + n_0 * (i_1 + n_1 * (...)). With this layout the mode-0 unfolding
/// is the value array read column-major.
class DenseTensor {
public:
  /// Zero tensor.
  explicit DenseTensor(Shape shape);
  /// Rejects wrong lengths and non-finite values.
  DenseTensor(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator[](std::size_t linear) const { return values_[linear]; }
  double& operator[](std::size_t linear) { return values_[linear]; }

  double at(std::span<const std::size_t> index) const { return values_[shape_.linear_index(index)]; }

  std::size_t count_nonzero() const;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
  Shape shape_;
  std::vector<double> values_;
};

/// Coordinate-format tensor. Entries are kept sorted by their mode-0-fastest
/// linear offset, duplicates are summed and exact zeros are dropped, so two
/// sparse tensors with equal content compare equal.
class SparseTensor {
public:
  /// Empty (all-zero) tensor.
  explicit SparseTensor(Shape shape);

  /// `indices` holds nnz multi-indices back to back (entry-major, 0-based).
  /// Duplicates are merged by summation.
  static SparseTensor from_coordinates(Shape shape, std::span<const std::size_t> indices,
                                       std::span<const double> values);

  /// Build from linear offsets. Offsets may repeat and come in any order.
  static SparseTensor from_linear(Shape shape, std::vector<std::size_t> offsets, std::vector<double> values);

  /// Keep the non-zero entries of a dense tensor.
  static SparseTensor from_dense(const DenseTensor& dense);

  const Shape& shape() const { return shape_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  /// Mode-`mode` coordinate of every stored entry.
  std::span<const std::size_t> mode_indices(std::size_t mode) const {
    return {indices_.data() + mode * nnz(), nnz()};
  }
  std::span<const std::size_t> offsets() const { return offsets_; }

  DenseTensor to_dense() const;

  friend bool operator==(const SparseTensor&, const SparseTensor&) = default;

private:
  SparseTensor(Shape shape, std::vector<std::size_t> sorted_offsets, std::vector<double> values, bool);

  Shape shape_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> indices_;  // mode-major: indices_[mode * nnz + e]
  std::vector<double> values_;
};

using Tensor = std::variant<DenseTensor, SparseTensor>;

const Shape& shape_of(const Tensor& t);
std::size_t nnz_of(const Tensor& t);
DenseTensor to_dense(const Tensor& t);

}  // namespace salscp
