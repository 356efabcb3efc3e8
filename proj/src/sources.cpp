#include "salscp/sources.hpp"

#include <cmath>
#include <stdexcept>

#include "salscp/kernels.hpp"
#include "salscp/random.hpp"

namespace salscp {

TensorSource::TensorSource(SourceKind kind, Shape shape, std::uint64_t seed)
    : kind_(kind), shape_(std::move(shape)), seed_(seed), moments_{DenseTensor(shape_), 0.0, 0.0} {}

TensorSource TensorSource::perturbed_cp(const KruskalModel& truth, double delta, std::uint64_t seed) {
  if (!std::isfinite(delta) || delta < 0.0) throw std::invalid_argument("perturbed_cp_source: delta must be >= 0");
  TensorSource src(SourceKind::PerturbedCp, truth.shape(), seed);
  src.delta_ = delta;
  DenseTensor mean = reconstruct(truth);
  const double n = static_cast<double>(src.shape_.size());
  src.moments_.total_variance = n * delta * delta / 3.0;
  src.moments_.second_moment_norm = src.moments_.total_variance + squared_norm(Tensor(mean));
  src.moments_.mean = std::move(mean);
  return src;
}

TensorSource TensorSource::sparse_random(const Shape& shape, double gamma, std::uint64_t seed) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("sparse_random_source: gamma must lie in [0, 1]");
  TensorSource src(SourceKind::SparseRandom, shape, seed);
  src.gamma_ = gamma;
  const double density = 1.0 - gamma;
  const double n = static_cast<double>(shape.size());
  DenseTensor mean(shape);
  for (double& v : mean.values()) v = density / 2.0;
  src.moments_.mean = std::move(mean);
  src.moments_.total_variance = n * (density / 3.0 - density * density / 4.0);
  src.moments_.second_moment_norm = n * density / 3.0;
  return src;
}

CostModel TensorSource::cost_model() const {
  return CostModel(shape_.size(), kind_ == SourceKind::SparseRandom ? gamma_ : 0.0);
}

double TensorSource::norm_bound() const {
  const double root_n = std::sqrt(static_cast<double>(shape_.size()));
  if (kind_ == SourceKind::SparseRandom) return root_n;
  return std::sqrt(squared_norm(moments_.mean)) + delta_ * root_n;
}

template <typename Fn>
void TensorSource::generate(std::uint64_t draw, Fn&& emit) const {
  auto eng = make_engine(seed_, draw);
  const std::size_t n = shape_.size();
  if (kind_ == SourceKind::PerturbedCp) {
    const auto mean = moments_.mean_dense().values();
    for (std::size_t e = 0; e < n; ++e) emit(e, mean[e] + delta_ * (2.0 * uniform01(eng) - 1.0));
    return;
  }
  // One uniform per entry: u < gamma means zero; otherwise (u - gamma) / (1 - gamma)
  // is uniform on [0, 1) given the entry is non-zero.
  for (std::size_t e = 0; e < n; ++e) {
    const double u = uniform01(eng);
    if (u < gamma_) continue;
    const double v = (u - gamma_) / (1.0 - gamma_);
    if (v != 0.0) emit(e, v);
  }
}

Tensor TensorSource::next() {
  const std::uint64_t d = draws_++;
  if (kind_ == SourceKind::PerturbedCp) {
    std::vector<double> values(shape_.size());
    generate(d, [&](std::size_t e, double v) { values[e] = v; });
    return DenseTensor(shape_, std::move(values));
  }
  std::vector<std::size_t> offsets;
  std::vector<double> values;
  generate(d, [&](std::size_t e, double v) {
    offsets.push_back(e);
    values.push_back(v);
  });
  return SparseTensor::from_linear(shape_, std::move(offsets), std::move(values));
}

std::vector<Tensor> TensorSource::sample_batch(std::size_t m) {
  if (m == 0) throw std::invalid_argument("sample_batch: batch size must be at least 1");
  std::vector<Tensor> out;
  out.reserve(m);
  for (std::size_t l = 0; l < m; ++l) out.push_back(next());
  return out;
}

BatchDraw TensorSource::draw_average(std::size_t m) {
  if (m == 0) throw std::invalid_argument("draw_average: batch size must be at least 1");
  std::vector<double> acc(shape_.size(), 0.0);
  double total_sq = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    double sq = 0.0;
    generate(draws_++, [&](std::size_t e, double v) {
      acc[e] += v;
      sq += v * v;
    });
    total_sq += sq;
  }
  const double md = static_cast<double>(m);
  for (double& v : acc) v /= md;
  DenseTensor avg(shape_, std::move(acc));
  if (kind_ == SourceKind::SparseRandom) return BatchDraw{SparseTensor::from_dense(avg), total_sq / md, m};
  return BatchDraw{std::move(avg), total_sq / md, m};
}

TensorSource perturbed_cp_source(const KruskalModel& truth, double delta, std::uint64_t seed) {
  return TensorSource::perturbed_cp(truth, delta, seed);
}

TensorSource sparse_random_source(const Shape& shape, double gamma, std::uint64_t seed) {
  return TensorSource::sparse_random(shape, gamma, seed);
}

std::vector<Tensor> sample_batch(TensorSource& src, std::size_t m) { return src.sample_batch(m); }

double exact_residual(const KruskalModel& m, const MomentModel& mm) {
  if (!(mm.second_moment_norm > 0.0)) throw std::invalid_argument("exact_residual: zero second moment");
  const double num = mm.total_variance + squared_residual(mm.mean, m);
  return std::sqrt(num) / std::sqrt(mm.second_moment_norm);
}

double expected_gradient_norm(const KruskalModel& m, const MomentModel& mm, RegWeight w) {
  double s = 0.0;
  for (std::size_t mode = 0; mode < m.order(); ++mode) s += squared_norm(grad_block(m, mm.mean, w, mode));
  return std::sqrt(s);
}

}  // namespace salscp
