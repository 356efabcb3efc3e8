#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "salscp/kruskal.hpp"
#include "salscp/sources.hpp"
#include "salscp/tensor.hpp"
#include "salscp/trace.hpp"

namespace salscp {

/// Relaxation stepsize alpha_k = c (Constant) or c / k (Decreasing), shared by
/// every mode of block k. Requires 0 < c <= 2, and c <= 1 for Constant.
struct StepSchedule {
  enum class Rule { Constant, Decreasing };

  Rule rule = Rule::Decreasing;
  double c = 1.0;

  static StepSchedule constant(double c);
  static StepSchedule decreasing(double c);
  /// "const:<c>" or "decr:<c>".
  static StepSchedule parse(const std::string& text);
  std::string to_string() const;

  void validate() const;
  double alpha(std::size_t k) const;
  /// The iterate bound only holds for alpha in (0, 1].
  bool bound_applies() const { return c <= 1.0; }
};

struct SalsConfig {
  RegWeight lambda{1e-3};
  std::size_t rank = 1;
  StepSchedule schedule;
  std::size_t batch_size = 1;
  std::size_t max_blocks = 100;
  /// Seed for the default initialization (the sample stream belongs to the source).
  std::uint64_t seed = 0;
  /// Throw MonitorViolation as soon as the iterate bound fails.
  bool check_bounds = false;
  /// Record ||grad F|| (exact expectation) in every trace row. Costs p extra MTTKRPs per block.
  bool record_gradient = false;
  bool record_wall_time = true;
  /// Copied into TraceRow::replicate.
  std::size_t replicate = 0;

  void validate() const;
};

/// Tracks ||A_i^{k+1}|| <= max(||A_i^1||, R(X^1), ..., R(X^k)) + 1e-9.
class BoundMonitor {
public:
  static constexpr double kSlack = 1e-9;

  explicit BoundMonitor(const KruskalModel& initial);

  void observe_radius(double r);
  /// Returns false (and records the violation) if `norm` exceeds the bound for `mode`.
  bool check(std::size_t mode, double norm);

  double bound(std::size_t mode) const;
  std::span<const double> initial_norms() const { return initial_norms_; }
  double running_max_radius() const { return running_max_radius_; }
  std::size_t checks() const { return checks_; }
  std::size_t violations() const { return violations_; }
  /// max over checks of norm - bound (negative when every check passed with room).
  double worst_margin() const { return worst_margin_; }

private:
  std::vector<double> initial_norms_;
  double running_max_radius_ = 0.0;
  std::size_t checks_ = 0;
  std::size_t violations_ = 0;
  double worst_margin_;
};

struct SalsResult {
  KruskalModel model;
  std::vector<TraceRow> trace;
  BoundMonitor monitor;
  /// False when the schedule allows alpha > 1, where the bound is not asserted.
  bool monitored = false;
};

/// Entrywise mean of a non-empty batch of same-shape, same-kind tensors. A
/// sparse batch averages to a sparse tensor on the union of supports.
Tensor batch_average(std::span<const Tensor> batch);

/// R = sqrt((1/lambda) (1/m) sum_l ||X^l||^2), the radius bounding every block
/// minimizer computed from this batch.
double radius(std::span<const Tensor> batch, RegWeight w);
double radius_from_mean_square(double mean_squared_norm, RegWeight w);

/// Block iteration k >= 1: average the batch once, then for each mode
/// A_i <- (1 - alpha_k) A_i + alpha_k A_hat_i with A_hat_i the exact block
/// minimizer against the average.
KruskalModel sals_block(const KruskalModel& m, std::span<const Tensor> batch, const SalsConfig& cfg, std::size_t k);

/// Runs cfg.max_blocks block iterations, drawing a fresh batch of
/// cfg.batch_size samples from `source` for each. Throws MonitorViolation when
/// cfg.check_bounds is set and the iterate bound fails.
SalsResult sals_run(TensorSource& source, const SalsConfig& cfg, const std::optional<KruskalModel>& init = std::nullopt);

}  // namespace salscp
