#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace salscp {

/// Dimensions (n_1, ..., n_p) of an order-p tensor. Modes are 0-based in the
/// API. Construction rejects p < 2, zero extents and products that overflow
/// std::size_t.
class Shape {
public:
  Shape(std::initializer_list<std::size_t> dims);
  explicit Shape(std::vector<std::size_t> dims);

  std::size_t order() const { return dims_.size(); }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  std::span<const std::size_t> dims() const { return dims_; }

  /// N = prod n_i.
  std::size_t size() const { return size_; }

  /// Column-major (mode-0 fastest) stride of `mode`.
  std::size_t stride(std::size_t mode) const { return strides_.at(mode); }

  /// Linear offset of a multi-index in the mode-0-fastest layout.
  std::size_t linear_index(std::span<const std::size_t> index) const;

  /// Inverse of linear_index; writes order() entries into `index`.
  void multi_index(std::size_t linear, std::span<std::size_t> index) const;

  void check_mode(std::size_t mode) const;

  friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }

private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

}  // namespace salscp
