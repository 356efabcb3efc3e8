#include "salscp/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace salscp {

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)), values_(shape_.size(), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_.size()) {
    throw std::invalid_argument("DenseTensor: value count does not match shape");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("DenseTensor: non-finite entry");
  }
}

std::size_t DenseTensor::count_nonzero() const {
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

SparseTensor::SparseTensor(Shape shape) : shape_(std::move(shape)) {}

SparseTensor::SparseTensor(Shape shape, std::vector<std::size_t> sorted_offsets, std::vector<double> values, bool)
    : shape_(std::move(shape)), offsets_(std::move(sorted_offsets)), values_(std::move(values)) {
  const std::size_t p = shape_.order();
  const std::size_t nz = values_.size();
  indices_.resize(p * nz);
  // Offsets ascend, so each multi-index follows from the previous one by a
  // carry-propagating add.
  const auto dims = shape_.dims();
  std::vector<std::size_t> idx(p + 1, 0);
  std::size_t prev = 0;
  for (std::size_t e = 0; e < nz; ++e) {
    idx[0] += offsets_[e] - prev;
    prev = offsets_[e];
    for (std::size_t m = 0; m < p && idx[m] >= dims[m]; ++m) {
      const std::size_t q = idx[m] / dims[m];
      idx[m] -= q * dims[m];
      idx[m + 1] += q;
    }
    std::size_t* out = indices_.data() + e;
    for (std::size_t m = 0; m < p; ++m) out[m * nz] = idx[m];
  }
}

SparseTensor SparseTensor::from_coordinates(Shape shape, std::span<const std::size_t> indices,
                                            std::span<const double> values) {
  const std::size_t p = shape.order();
  if (indices.size() != values.size() * p) {
    throw std::invalid_argument("SparseTensor: index count does not match nnz * order");
  }
  std::vector<std::size_t> offsets(values.size());
  for (std::size_t e = 0; e < values.size(); ++e) {
    offsets[e] = shape.linear_index(indices.subspan(e * p, p));
  }
  return from_linear(std::move(shape), std::move(offsets), std::vector<double>(values.begin(), values.end()));
}

SparseTensor SparseTensor::from_linear(Shape shape, std::vector<std::size_t> offsets, std::vector<double> values) {
  if (offsets.size() != values.size()) {
    throw std::invalid_argument("SparseTensor: offset and value counts differ");
  }
  for (std::size_t e = 0; e < values.size(); ++e) {
    if (offsets[e] >= shape.size()) throw std::out_of_range("SparseTensor: offset out of bounds");
    if (!std::isfinite(values[e])) throw std::invalid_argument("SparseTensor: non-finite entry");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable so that duplicates are summed in input order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return offsets[a] < offsets[b]; });

  std::vector<std::size_t> merged_offsets;
  std::vector<double> merged_values;
  merged_offsets.reserve(values.size());
  merged_values.reserve(values.size());
  for (std::size_t k = 0; k < order.size();) {
    const std::size_t off = offsets[order[k]];
    double sum = 0.0;
    for (; k < order.size() && offsets[order[k]] == off; ++k) sum += values[order[k]];
    if (sum != 0.0) {
      merged_offsets.push_back(off);
      merged_values.push_back(sum);
    }
  }
  return SparseTensor(std::move(shape), std::move(merged_offsets), std::move(merged_values), true);
}

SparseTensor SparseTensor::from_dense(const DenseTensor& dense) {
  const auto v = dense.values();
  const std::size_t nz = dense.count_nonzero();
  std::vector<std::size_t> offsets;
  std::vector<double> values;
  offsets.reserve(nz);
  values.reserve(nz);
  for (std::size_t e = 0; e < v.size(); ++e) {
    if (v[e] != 0.0) {
      offsets.push_back(e);
      values.push_back(v[e]);
    }
  }
  return SparseTensor(dense.shape(), std::move(offsets), std::move(values), true);
}

DenseTensor SparseTensor::to_dense() const {
  DenseTensor out(shape_);
  for (std::size_t e = 0; e < nnz(); ++e) out[offsets_[e]] = values_[e];
  return out;
}

const Shape& shape_of(const Tensor& t) {
  return std::visit([](const auto& x) -> const Shape& { return x.shape(); }, t);
}

std::size_t nnz_of(const Tensor& t) {
  if (const auto* d = std::get_if<DenseTensor>(&t)) return d->count_nonzero();
  return std::get<SparseTensor>(t).nnz();
}

DenseTensor to_dense(const Tensor& t) {
  if (const auto* d = std::get_if<DenseTensor>(&t)) return *d;
  return std::get<SparseTensor>(t).to_dense();
}

}  // namespace salscp
