#include "salscp/cost_model.hpp"

#include <cmath>
#include <stdexcept>

namespace salscp {

CostModel::CostModel(std::size_t n, double zero_fraction) : total_entries(n), gamma(zero_fraction) {
  if (n == 0) throw std::invalid_argument("CostModel: N must be at least 1");
  if (!(zero_fraction >= 0.0 && zero_fraction <= 1.0)) throw std::invalid_argument("CostModel: gamma must lie in [0, 1]");
}

double cost_per_block(const CostModel& cm, std::size_t m) {
  if (m == 0) throw std::invalid_argument("cost_per_block: batch size must be at least 1");
  const double n = static_cast<double>(cm.total_entries);
  return expected_nnz(cm, m) + static_cast<double>(m - 1) * n * (1.0 - cm.gamma);
}

double expected_nnz(const CostModel& cm, std::size_t m) {
  return static_cast<double>(cm.total_entries) * (1.0 - std::pow(cm.gamma, static_cast<double>(m)));
}

double nnz_standard_deviation(const CostModel& cm, std::size_t m) {
  const double q = 1.0 - std::pow(cm.gamma, static_cast<double>(m));
  return std::sqrt(static_cast<double>(cm.total_entries) * q * (1.0 - q));
}

}  // namespace salscp
