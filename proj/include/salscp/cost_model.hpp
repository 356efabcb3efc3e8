#pragma once

#include <cstddef>

namespace salscp {

/// Abstract per-block cost of SALS on tensors with N entries, each entry zero
/// with probability gamma.
struct CostModel {
  std::size_t total_entries = 1;
  double gamma = 0.0;

  CostModel() = default;
  CostModel(std::size_t n, double zero_fraction);
};

/// C(m) = N (1 - gamma^m) + (m - 1) N (1 - gamma): MTTKRP on the averaged
/// tensor plus forming the average. Throws for m == 0.
double cost_per_block(const CostModel& cm, std::size_t m);

/// N (1 - gamma^m), the expected nnz of an average of m independent samples.
double expected_nnz(const CostModel& cm, std::size_t m);

/// Binomial standard deviation of that nnz count, sqrt(N q (1 - q)) with
/// q = 1 - gamma^m.
double nnz_standard_deviation(const CostModel& cm, std::size_t m);

}  // namespace salscp
