#include "salscp/shape.hpp"

#include <stdexcept>
#include <string>

namespace salscp {

Shape::Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) {
    throw std::invalid_argument("Shape: tensor order must be at least 2");
  }
  strides_.resize(dims_.size());
  std::size_t total = 1;
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    if (dims_[m] == 0) {
      throw std::invalid_argument("Shape: mode " + std::to_string(m) + " has zero extent");
    }
    strides_[m] = total;
    if (__builtin_mul_overflow(total, dims_[m], &total)) {
      throw std::invalid_argument("Shape: total size overflows the index type");
    }
  }
  size_ = total;
}

std::size_t Shape::linear_index(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) {
    throw std::invalid_argument("Shape: multi-index has wrong length");
  }
  std::size_t lin = 0;
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    if (index[m] >= dims_[m]) {
      throw std::out_of_range("Shape: index " + std::to_string(index[m]) + " out of bounds in mode " +
                              std::to_string(m));
    }
    lin += index[m] * strides_[m];
  }
  return lin;
}

void Shape::multi_index(std::size_t linear, std::span<std::size_t> index) const {
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    index[m] = linear % dims_[m];
    linear /= dims_[m];
  }
}

void Shape::check_mode(std::size_t mode) const {
  if (mode >= dims_.size()) {
    throw std::out_of_range("invalid mode " + std::to_string(mode) + " for order-" +
                            std::to_string(dims_.size()) + " tensor");
  }
}

}  // namespace salscp
