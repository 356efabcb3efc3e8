#include "salscp/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace salscp {
namespace {

double sum_squares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_factors(const Shape& shape, std::span<const Matrix> factors, std::size_t mode) {
  shape.check_mode(mode);
  if (factors.size() != shape.order()) {
    throw std::invalid_argument("mttkrp: expected " + std::to_string(shape.order()) + " factors, got " +
                                std::to_string(factors.size()));
  }
  const std::size_t r = factors[0].cols();
  for (std::size_t m = 0; m < factors.size(); ++m) {
    if (factors[m].cols() != r) throw std::invalid_argument("mttkrp: factors disagree on rank");
    if (factors[m].rows() != shape.dim(m)) {
      throw std::invalid_argument("mttkrp: factor " + std::to_string(m) + " has " +
                                  std::to_string(factors[m].rows()) + " rows, shape needs " +
                                  std::to_string(shape.dim(m)));
    }
  }
}

// Rows of the Khatri-Rao product of factors[first..last), with factors[first]
// varying fastest: row l = prod_m A_m[i_m, :].
std::vector<double> row_products(std::span<const Matrix> factors, std::size_t first, std::size_t last,
                                 std::size_t r) {
  std::vector<double> rows(r, 1.0);
  std::size_t len = 1;
  for (std::size_t m = first; m < last; ++m) {
    const Matrix& a = factors[m];
    std::vector<double> next(len * a.rows() * r);
    for (std::size_t im = 0; im < a.rows(); ++im) {
      auto arow = a.row(im);
      for (std::size_t l = 0; l < len; ++l) {
        const double* src = rows.data() + l * r;
        double* dst = next.data() + (l + len * im) * r;
        for (std::size_t j = 0; j < r; ++j) dst[j] = src[j] * arow[j];
      }
    }
    rows.swap(next);
    len *= a.rows();
  }
  return rows;
}

}  // namespace

double frobenius_norm(const Matrix& a) { return std::sqrt(squared_norm(a)); }
double frobenius_norm(const DenseTensor& t) { return std::sqrt(sum_squares(t.values())); }
double frobenius_norm(const SparseTensor& t) { return std::sqrt(sum_squares(t.values())); }
double frobenius_norm(const Tensor& t) { return std::sqrt(squared_norm(t)); }

double squared_norm(const Matrix& a) { return sum_squares(a.values()); }
double squared_norm(const Tensor& t) {
  return std::visit([](const auto& x) { return sum_squares(x.values()); }, t);
}

double squared_distance(const Tensor& a, const DenseTensor& b) {
  if (!(shape_of(a) == b.shape())) throw std::invalid_argument("squared_distance: shape mismatch");
  const auto bv = b.values();
  double s = 0.0;
  if (const auto* d = std::get_if<DenseTensor>(&a)) {
    const auto av = d->values();
    for (std::size_t e = 0; e < av.size(); ++e) {
      const double diff = av[e] - bv[e];
      s += diff * diff;
    }
    return s;
  }
  const auto& sp = std::get<SparseTensor>(a);
  const auto off = sp.offsets();
  const auto sv = sp.values();
  std::size_t k = 0;
  for (std::size_t e = 0; e < bv.size(); ++e) {
    double diff = -bv[e];
    if (k < off.size() && off[k] == e) diff += sv[k++];
    s += diff * diff;
  }
  return s;
}

namespace {

// Column stride of each mode within the mode-`mode` unfolding.
std::vector<std::size_t> unfolding_strides(const Shape& shape, std::size_t mode) {
  std::vector<std::size_t> s(shape.order(), 0);
  std::size_t acc = 1;
  for (std::size_t k = 0; k < shape.order(); ++k) {
    if (k == mode) continue;
    s[k] = acc;
    acc *= shape.dim(k);
  }
  return s;
}

}  // namespace

Matrix unfold(const DenseTensor& t, std::size_t mode) {
  const Shape& shape = t.shape();
  shape.check_mode(mode);
  const std::size_t ni = shape.dim(mode);
  Matrix out(ni, shape.size() / ni);
  const auto strides = unfolding_strides(shape, mode);
  std::vector<std::size_t> idx(shape.order());
  for (std::size_t lin = 0; lin < shape.size(); ++lin) {
    shape.multi_index(lin, idx);
    std::size_t col = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) col += idx[k] * strides[k];
    out(idx[mode], col) = t[lin];
  }
  return out;
}

SparseMatrix unfold(const SparseTensor& t, std::size_t mode) {
  const Shape& shape = t.shape();
  shape.check_mode(mode);
  SparseMatrix out;
  out.rows = shape.dim(mode);
  out.cols = shape.size() / out.rows;
  const auto strides = unfolding_strides(shape, mode);
  const std::size_t nz = t.nnz();
  out.row_index.assign(t.mode_indices(mode).begin(), t.mode_indices(mode).end());
  out.col_index.assign(nz, 0);
  for (std::size_t k = 0; k < shape.order(); ++k) {
    if (k == mode) continue;
    const auto ik = t.mode_indices(k);
    for (std::size_t e = 0; e < nz; ++e) out.col_index[e] += ik[e] * strides[k];
  }
  out.values.assign(t.values().begin(), t.values().end());
  return out;
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("khatri_rao: column counts differ");
  const std::size_t r = a.cols();
  Matrix out(a.rows() * b.rows(), r);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    for (std::size_t k = 0; k < b.rows(); ++k) {
      auto bk = b.row(k);
      auto o = out.row(i * b.rows() + k);
      for (std::size_t j = 0; j < r; ++j) o[j] = ai[j] * bk[j];
    }
  }
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  hadamard_inplace(out, b);
  return out;
}

void hadamard_inplace(Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("hadamard: dimension mismatch");
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t e = 0; e < av.size(); ++e) av[e] *= bv[e];
}

Matrix mttkrp(const DenseTensor& t, std::span<const Matrix> factors, std::size_t mode) {
  const Shape& shape = t.shape();
  check_factors(shape, factors, mode);
  const std::size_t r = factors[0].cols();
  const std::size_t p = shape.order();
  const std::size_t ni = shape.dim(mode);

  // Split the layout into left (modes < mode) x ni x right (modes > mode).
  const std::vector<double> left_rows = row_products(factors, 0, mode, r);
  const std::vector<double> right_rows = row_products(factors, mode + 1, p, r);
  const std::size_t left = left_rows.size() / r;
  const std::size_t right = right_rows.size() / r;

  Matrix out(ni, r);
  std::vector<double> w(left * r);
  const double* x = t.values().data();
  for (std::size_t rho = 0; rho < right; ++rho) {
    const double* kr = right_rows.data() + rho * r;
    for (std::size_t l = 0; l < left; ++l) {
      const double* kl = left_rows.data() + l * r;
      for (std::size_t j = 0; j < r; ++j) w[l * r + j] = kl[j] * kr[j];
    }
    for (std::size_t ii = 0; ii < ni; ++ii) {
      double* o = out.row(ii).data();
      const double* xs = x + left * (ii + ni * rho);
      for (std::size_t l = 0; l < left; ++l) {
        const double xv = xs[l];
        const double* wl = w.data() + l * r;
        for (std::size_t j = 0; j < r; ++j) o[j] += xv * wl[j];
      }
    }
  }
  return out;
}

Matrix mttkrp(const SparseTensor& t, std::span<const Matrix> factors, std::size_t mode) {
  const Shape& shape = t.shape();
  check_factors(shape, factors, mode);
  const std::size_t r = factors[0].cols();
  const std::size_t p = shape.order();
  Matrix out(shape.dim(mode), r);
  const double* vals = t.values().data();
  const std::size_t* target = t.mode_indices(mode).data();
  std::vector<const std::size_t*> idx;
  std::vector<const double*> rows;
  for (std::size_t m = 0; m < p; ++m) {
    if (m == mode) continue;
    idx.push_back(t.mode_indices(m).data());
    rows.push_back(factors[m].values().data());
  }
  const std::size_t q = idx.size();
  std::vector<double> w(r);
  double* o = out.values().data();
  for (std::size_t e = 0; e < t.nnz(); ++e) {
    const double* a = rows[0] + idx[0][e] * r;
    for (std::size_t j = 0; j < r; ++j) w[j] = vals[e] * a[j];
    for (std::size_t m = 1; m < q; ++m) {
      a = rows[m] + idx[m][e] * r;
      for (std::size_t j = 0; j < r; ++j) w[j] *= a[j];
    }
    double* dst = o + target[e] * r;
    for (std::size_t j = 0; j < r; ++j) dst[j] += w[j];
  }
  return out;
}

Matrix mttkrp(const Tensor& t, std::span<const Matrix> factors, std::size_t mode) {
  return std::visit([&](const auto& x) { return mttkrp(x, factors, mode); }, t);
}

}  // namespace salscp
