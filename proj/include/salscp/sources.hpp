#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "salscp/cost_model.hpp"
#include "salscp/kruskal.hpp"
#include "salscp/tensor.hpp"

namespace salscp {

/// First and second moments of a random tensor, enough to evaluate
/// E||X - [[x]]||^2 = sum_i var(X_i) + ||E[X] - [[x]]||^2 exactly.
struct MomentModel {
  Tensor mean;                       // always a DenseTensor
  double total_variance = 0.0;       // sum_i var(X_i)
  double second_moment_norm = 0.0;   // E||X||^2 = total_variance + ||E[X]||^2

  const DenseTensor& mean_dense() const { return std::get<DenseTensor>(mean); }
};

enum class SourceKind { PerturbedCp, SparseRandom };

/// Average of one batch plus the per-sample statistic the iterate bound needs.
struct BatchDraw {
  Tensor average;
  double mean_squared_norm = 0.0;  // (1/m) sum_l ||X^l||^2
  std::size_t size = 0;
};

/// Seeded stream of i.i.d. random tensors with known moments.
///
/// Draw d (0-based, counted over the life of the source) is generated from
/// its own engine keyed by (seed, d), so the stream is deterministic given
/// (seed, draw count) and independent of how draws are grouped into batches.
///
/// PerturbedCp: dense draws E[X] + U with U_i ~ Uniform(-delta, delta),
/// E[X] = reconstruct(truth).
/// SparseRandom: each entry independently non-zero with probability
/// 1 - gamma, non-zero values ~ Uniform(0, 1).
class TensorSource {
public:
  static TensorSource perturbed_cp(const KruskalModel& truth, double delta, std::uint64_t seed);
  static TensorSource sparse_random(const Shape& shape, double gamma, std::uint64_t seed);

  SourceKind kind() const { return kind_; }
  const Shape& shape() const { return shape_; }
  std::uint64_t seed() const { return seed_; }
  double delta() const { return delta_; }
  double gamma() const { return gamma_; }
  std::uint64_t draws_taken() const { return draws_; }

  const MomentModel& moments() const { return moments_; }
  /// Zero fraction of a draw: gamma for SparseRandom, 0 for dense draws.
  CostModel cost_model() const;
  /// Almost-sure bound on ||X||.
  double norm_bound() const;

  Tensor next();
  std::vector<Tensor> sample_batch(std::size_t m);
  /// Equivalent to averaging sample_batch(m) (bit for bit), without holding
  /// the m samples in memory.
  BatchDraw draw_average(std::size_t m);

private:
  TensorSource(SourceKind kind, Shape shape, std::uint64_t seed);

  template <typename Fn>
  void generate(std::uint64_t draw, Fn&& emit) const;

  SourceKind kind_;
  Shape shape_;
  std::uint64_t seed_;
  double delta_ = 0.0;
  double gamma_ = 0.0;
  std::uint64_t draws_ = 0;
  MomentModel moments_;
};

TensorSource perturbed_cp_source(const KruskalModel& truth, double delta, std::uint64_t seed);
TensorSource sparse_random_source(const Shape& shape, double gamma, std::uint64_t seed);
std::vector<Tensor> sample_batch(TensorSource& src, std::size_t m);

/// sqrt(E||X - [[x]]||^2) / sqrt(E||X||^2) from the moment decomposition.
double exact_residual(const KruskalModel& m, const MomentModel& mm);

/// ||grad F(x)|| over all blocks, using grad F(x) = grad f(x; E[X]).
double expected_gradient_norm(const KruskalModel& m, const MomentModel& mm, RegWeight w);

}  // namespace salscp
