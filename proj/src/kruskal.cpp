#include "salscp/kruskal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "salscp/kernels.hpp"
#include "salscp/random.hpp"

namespace salscp {
namespace {

Shape shape_from_factors(const std::vector<Matrix>& factors) {
  std::vector<std::size_t> dims;
  dims.reserve(factors.size());
  for (const auto& a : factors) dims.push_back(a.rows());
  return Shape(std::move(dims));
}

void check_tensor_shape(const KruskalModel& m, const Tensor& x) {
  if (!(shape_of(x) == m.shape())) throw std::invalid_argument("tensor shape does not match model shape");
}

// Calls fn(linear_offset, reconstructed_value) for every entry, in layout order.
template <typename Fn>
void for_each_entry(const KruskalModel& m, Fn&& fn) {
  const Matrix w = khatri_rao_chain(m.factors().subspan(1));
  const Matrix& a0 = m.factor(0);
  const std::size_t n0 = a0.rows();
  const std::size_t r = m.rank();
  for (std::size_t rho = 0; rho < w.rows(); ++rho) {
    const double* wr = w.row(rho).data();
    for (std::size_t i = 0; i < n0; ++i) {
      const double* ai = a0.row(i).data();
      double v = 0.0;
      for (std::size_t j = 0; j < r; ++j) v += ai[j] * wr[j];
      fn(i + n0 * rho, v);
    }
  }
}

}  // namespace

RegWeight::RegWeight(double value) : lambda(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("regularization weight must be finite and non-negative");
  }
}

void RegWeight::require_positive() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("regularization weight must be positive for solver paths");
}

KruskalModel::KruskalModel(std::vector<Matrix> factors)
    : shape_(shape_from_factors(factors)), rank_(factors.front().cols()), factors_(std::move(factors)) {
  if (rank_ == 0) throw std::invalid_argument("KruskalModel: rank must be at least 1");
  for (std::size_t m = 0; m < factors_.size(); ++m) {
    if (factors_[m].cols() != rank_) throw std::invalid_argument("KruskalModel: factors disagree on rank");
    if (!factors_[m].all_finite()) throw std::invalid_argument("KruskalModel: non-finite factor entry");
  }
}

KruskalModel::KruskalModel(const Shape& shape, std::size_t rank) : shape_(shape), rank_(rank) {
  if (rank == 0) throw std::invalid_argument("KruskalModel: rank must be at least 1");
  for (auto n : shape.dims()) factors_.emplace_back(n, rank);
}

void KruskalModel::set_factor(std::size_t mode, Matrix a) {
  shape_.check_mode(mode);
  if (a.rows() != shape_.dim(mode) || a.cols() != rank_) {
    throw std::invalid_argument("set_factor: factor " + std::to_string(mode) + " must be " +
                                std::to_string(shape_.dim(mode)) + " x " + std::to_string(rank_));
  }
  factors_[mode] = std::move(a);
}

double KruskalModel::squared_norm() const {
  double s = 0.0;
  for (const auto& a : factors_) s += salscp::squared_norm(a);
  return s;
}

KruskalModel random_model(const Shape& shape, std::size_t rank, std::uint64_t seed) {
  auto eng = make_engine(seed, 0);
  KruskalModel m(shape, rank);
  for (std::size_t mode = 0; mode < shape.order(); ++mode) {
    Matrix a(shape.dim(mode), rank);
    for (double& v : a.values()) v = uniform01(eng);
    m.set_factor(mode, std::move(a));
  }
  return m;
}

Matrix khatri_rao_chain(std::span<const Matrix> factors) {
  if (factors.empty()) throw std::invalid_argument("khatri_rao_chain: no factors");
  Matrix acc = factors.front();
  for (std::size_t m = 1; m < factors.size(); ++m) acc = khatri_rao(factors[m], acc);
  return acc;
}

DenseTensor reconstruct(const KruskalModel& m) {
  DenseTensor out(m.shape());
  for_each_entry(m, [&](std::size_t lin, double v) { out[lin] = v; });
  return out;
}

Matrix gram_product(std::span<const Matrix> grams, std::size_t mode) {
  if (mode >= grams.size()) throw std::out_of_range("gram_product: invalid mode " + std::to_string(mode));
  const std::size_t r = grams.front().rows();
  Matrix g(r, r, 1.0);
  for (std::size_t m = 0; m < grams.size(); ++m) {
    if (m != mode) hadamard_inplace(g, grams[m]);
  }
  return g;
}

Matrix gram_product(const KruskalModel& m, std::size_t mode) {
  m.shape().check_mode(mode);
  const std::size_t r = m.rank();
  Matrix g(r, r, 1.0);
  for (std::size_t k = 0; k < m.order(); ++k) {
    if (k != mode) hadamard_inplace(g, gram(m.factor(k)));
  }
  return g;
}

double reconstruction_squared_norm(const KruskalModel& m) {
  const std::size_t r = m.rank();
  Matrix g(r, r, 1.0);
  for (const auto& a : m.factors()) hadamard_inplace(g, gram(a));
  double s = 0.0;
  for (double v : g.values()) s += v;
  return s;
}

double inner_product(const Tensor& x, const KruskalModel& m) {
  check_tensor_shape(m, x);
  const std::size_t last = m.order() - 1;
  const Matrix proj = mttkrp(x, m.factors(), last);
  double s = 0.0;
  const auto pv = proj.values();
  const auto av = m.factor(last).values();
  for (std::size_t e = 0; e < pv.size(); ++e) s += pv[e] * av[e];
  return s;
}

double squared_residual(const Tensor& x, const KruskalModel& m) {
  check_tensor_shape(m, x);
  if (const auto* d = std::get_if<DenseTensor>(&x)) {
    double s = 0.0;
    for_each_entry(m, [&](std::size_t lin, double v) {
      const double diff = (*d)[lin] - v;
      s += diff * diff;
    });
    return s;
  }
  const double s = squared_norm(x) - 2.0 * inner_product(x, m) + reconstruction_squared_norm(m);
  return s > 0.0 ? s : 0.0;
}

double objective(const KruskalModel& m, const Tensor& x, RegWeight w) {
  return 0.5 * squared_residual(x, m) + 0.5 * w.lambda * m.squared_norm();
}

Matrix grad_block(const KruskalModel& m, const Tensor& x, RegWeight w, std::size_t mode) {
  check_tensor_shape(m, x);
  Matrix g = multiply(m.factor(mode), hessian_block(m, w, mode));
  const Matrix proj = mttkrp(x, m.factors(), mode);
  auto gv = g.values();
  const auto pv = proj.values();
  for (std::size_t e = 0; e < gv.size(); ++e) gv[e] -= pv[e];
  return g;
}

Matrix hessian_block(const KruskalModel& m, RegWeight w, std::size_t mode) {
  Matrix h = gram_product(m, mode);
  for (std::size_t j = 0; j < h.rows(); ++j) h(j, j) += w.lambda;
  return h;
}

}  // namespace salscp
