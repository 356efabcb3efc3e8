#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "salscp/kernels.hpp"
#include "salscp/sals.hpp"
#include "salscp/sources.hpp"

using namespace salscp;

namespace {

const Shape kExample{30, 40, 50};

KruskalModel example_truth() { return random_model(kExample, 5, 7); }

}  // namespace

TEST(PerturbedCp, Validation) {
  EXPECT_THROW(perturbed_cp_source(example_truth(), -0.1, 1), std::invalid_argument);
  EXPECT_THROW(perturbed_cp_source(example_truth(), NAN, 1), std::invalid_argument);
}

TEST(PerturbedCp, ZeroNoiseReturnsMean) {
  TensorSource src = perturbed_cp_source(example_truth(), 0.0, 1);
  const DenseTensor mean = reconstruct(example_truth());
  for (int i = 0; i < 3; ++i) EXPECT_EQ(std::get<DenseTensor>(src.next()), mean);
  EXPECT_EQ(src.moments().total_variance, 0.0);
}

TEST(PerturbedCp, SupportAndNormBound) {
  const KruskalModel truth = random_model(Shape{4, 5, 6}, 2, 3);
  TensorSource src = perturbed_cp_source(truth, 0.5, 2);
  const DenseTensor mean = reconstruct(truth);
  for (int i = 0; i < 50; ++i) {
    const Tensor x = src.next();
    const auto v = std::get<DenseTensor>(x).values();
    for (std::size_t e = 0; e < v.size(); ++e) {
      EXPECT_GE(v[e], mean[e] - 0.5);
      EXPECT_LE(v[e], mean[e] + 0.5);
    }
    EXPECT_LE(frobenius_norm(x), src.norm_bound());
  }
}

TEST(PerturbedCp, MomentsMatchMonteCarlo) {
  const KruskalModel truth = example_truth();
  TensorSource src = perturbed_cp_source(truth, 1.0, 11);
  const MomentModel& mm = src.moments();
  const double n = static_cast<double>(kExample.size());
  EXPECT_DOUBLE_EQ(mm.total_variance, n / 3.0);
  const double mean_sq = oracle::sum_squares(mm.mean_dense().values());
  EXPECT_NEAR(mm.second_moment_norm, mm.total_variance + mean_sq, 1e-9 * mm.second_moment_norm);

  // One pass over 10^4 draws feeds three Monte-Carlo estimates.
  const int draws = 10000;
  double noise = 0.0, second = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto v = std::get<DenseTensor>(src.next()).values();
    const auto mu = mm.mean_dense().values();
    for (std::size_t e = 0; e < v.size(); ++e) {
      noise += (v[e] - mu[e]) * (v[e] - mu[e]);
      second += v[e] * v[e];
    }
  }
  noise /= draws;
  second /= draws;
  EXPECT_NEAR(noise / n, 1.0 / 3.0, 0.01 / 3.0);
  EXPECT_NEAR(second, mm.second_moment_norm, 0.01 * mm.second_moment_norm);

  // At the truth the residual is pure noise.
  const double analytic = std::sqrt(n / 3.0) / std::sqrt(n / 3.0 + mean_sq);
  EXPECT_NEAR(exact_residual(truth, mm), analytic, 1e-12);
  EXPECT_NEAR(exact_residual(truth, mm), std::sqrt(noise) / std::sqrt(second), 0.01 * analytic);
}

TEST(PerturbedCp, EntrywiseVarianceOfLargeBatch) {
  const KruskalModel truth = random_model(Shape{4, 5, 6}, 3, 5);
  TensorSource src = perturbed_cp_source(truth, 1.0, 12);
  const auto batch = sample_batch(src, 10000);
  const auto mu = src.moments().mean_dense().values();
  double pooled = 0.0;
  for (std::size_t e = 0; e < mu.size(); ++e) {
    double mean = 0.0, sq = 0.0;
    for (const auto& x : batch) mean += std::get<DenseTensor>(x)[e];
    mean /= batch.size();
    for (const auto& x : batch) sq += std::pow(std::get<DenseTensor>(x)[e] - mean, 2);
    pooled += sq / (batch.size() - 1);
  }
  pooled /= mu.size();
  EXPECT_NEAR(pooled, 1.0 / 3.0, 0.01 / 3.0);
}

TEST(SparseRandom, Validation) {
  EXPECT_THROW(sparse_random_source(kExample, -0.1, 1), std::invalid_argument);
  EXPECT_THROW(sparse_random_source(kExample, 1.1, 1), std::invalid_argument);
}

TEST(SparseRandom, DegenerateGammas) {
  TensorSource empty = sparse_random_source(Shape{5, 6, 7}, 1.0, 3);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(nnz_of(empty.next()), 0u);
  EXPECT_THROW(exact_residual(KruskalModel(Shape{5, 6, 7}, 1), empty.moments()), std::invalid_argument);

  TensorSource full = sparse_random_source(Shape{5, 6, 7}, 0.0, 3);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(nnz_of(full.next()), 210u);
}

TEST(SparseRandom, DensityAndMeanMatchMoments) {
  TensorSource src = sparse_random_source(kExample, 0.1, 5);
  const double n = static_cast<double>(kExample.size());
  const int draws = 100;
  double nnz = 0.0, sum = 0.0;
  for (int d = 0; d < draws; ++d) {
    const Tensor x = src.next();
    const auto& s = std::get<SparseTensor>(x);
    nnz += static_cast<double>(s.nnz());
    for (double v : s.values()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
      sum += v;
    }
    EXPECT_LE(frobenius_norm(x), src.norm_bound());
  }
  const double sd = std::sqrt(draws * n * 0.9 * 0.1);
  EXPECT_NEAR(nnz, draws * n * 0.9, 3.0 * sd);
  EXPECT_NEAR(sum / (draws * n), 0.45, 0.01 * 0.45);
  EXPECT_DOUBLE_EQ(src.moments().mean_dense()[0], 0.45);
  EXPECT_NEAR(src.moments().total_variance, n * (0.9 / 3.0 - 0.81 / 4.0), 1e-9);
}

TEST(Sources, UnbiasedEntrywise) {
  const Shape s{4, 5, 6};
  const int draws = 10000;
  TensorSource dense = perturbed_cp_source(random_model(s, 2, 9), 1.0, 21);
  TensorSource sparse = sparse_random_source(s, 0.1, 22);
  for (TensorSource* src : {&dense, &sparse}) {
    const BatchDraw avg = src->draw_average(draws);
    const DenseTensor a = to_dense(avg.average);
    const auto mu = src->moments().mean_dense().values();
    const double sigma = std::sqrt(src->moments().total_variance / s.size() / draws);
    for (std::size_t e = 0; e < mu.size(); ++e) EXPECT_NEAR(a[e], mu[e], 3.0 * sigma) << e;
  }
}

TEST(Sources, MomentInvariants) {
  for (double g : {0.0, 0.1, 0.5, 1.0}) {
    const TensorSource src = sparse_random_source(Shape{3, 4}, g, 1);
    const MomentModel& mm = src.moments();
    EXPECT_GE(mm.total_variance, 0.0);
    EXPECT_GE(mm.second_moment_norm, oracle::sum_squares(mm.mean_dense().values()) - 1e-12);
  }
  for (double d : {0.0, 0.3, 2.0}) {
    const TensorSource src = perturbed_cp_source(random_model(Shape{3, 4}, 2, 1), d, 1);
    const MomentModel& mm = src.moments();
    EXPECT_GE(mm.total_variance, 0.0);
    EXPECT_GE(mm.second_moment_norm, oracle::sum_squares(mm.mean_dense().values()) - 1e-12);
  }
}

TEST(SampleBatch, DeterministicAndStreamConsistent) {
  const Shape s{4, 5, 6};
  for (int kind = 0; kind < 2; ++kind) {
    auto make = [&] {
      return kind == 0 ? perturbed_cp_source(random_model(s, 2, 1), 1.0, 77) : sparse_random_source(s, 0.3, 77);
    };
    TensorSource a = make(), b = make();
    const auto five = sample_batch(a, 5);
    auto three = sample_batch(b, 3);
    const auto two = sample_batch(b, 2);
    three.insert(three.end(), two.begin(), two.end());
    EXPECT_EQ(five, three);
    EXPECT_EQ(a.draws_taken(), 5u);
    EXPECT_NE(five[0], five[1]);
    EXPECT_THROW(sample_batch(a, 0), std::invalid_argument);

    TensorSource other = kind == 0 ? perturbed_cp_source(random_model(s, 2, 1), 1.0, 78) : sparse_random_source(s, 0.3, 78);
    EXPECT_NE(other.next(), five[0]);
  }
}

TEST(DrawAverage, BitwiseEqualToAveragingSamples) {
  const Shape s{5, 6, 7};
  for (int kind = 0; kind < 2; ++kind) {
    for (std::size_t m : {1u, 3u, 10u}) {
      auto make = [&] {
        return kind == 0 ? perturbed_cp_source(random_model(s, 2, 1), 1.0, 5) : sparse_random_source(s, 0.2, 5);
      };
      TensorSource a = make(), b = make();
      const BatchDraw d = a.draw_average(m);
      const auto batch = sample_batch(b, m);
      EXPECT_EQ(d.average, batch_average(batch));
      double ms = 0.0;
      for (const auto& x : batch) ms += squared_norm(x);
      EXPECT_EQ(d.mean_squared_norm, ms / static_cast<double>(m));
      EXPECT_EQ(d.size, m);
    }
  }
}

TEST(ExactResidual, Examples) {
  const KruskalModel truth = random_model(Shape{6, 7, 8}, 3, 2);
  const TensorSource clean = perturbed_cp_source(truth, 0.0, 1);
  EXPECT_NEAR(exact_residual(truth, clean.moments()), 0.0, 1e-15);
  const TensorSource noisy = perturbed_cp_source(truth, 1.0, 1);
  EXPECT_DOUBLE_EQ(exact_residual(KruskalModel(truth.shape(), 3), noisy.moments()), 1.0);
  const TensorSource sparse = sparse_random_source(truth.shape(), 0.1, 1);
  EXPECT_DOUBLE_EQ(exact_residual(KruskalModel(truth.shape(), 2), sparse.moments()), 1.0);
}

TEST(ExpectedGradient, MatchesGradientAgainstMean) {
  const KruskalModel truth = random_model(Shape{6, 7, 8}, 3, 2);
  const TensorSource src = perturbed_cp_source(truth, 1.0, 1);
  const KruskalModel m = random_model(truth.shape(), 2, 4);
  const RegWeight w(0.01);
  double s = 0.0;
  for (std::size_t mode = 0; mode < 3; ++mode) s += squared_norm(grad_block(m, src.moments().mean, w, mode));
  EXPECT_DOUBLE_EQ(expected_gradient_norm(m, src.moments(), w), std::sqrt(s));
}
