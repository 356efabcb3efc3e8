#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "salscp/kruskal.hpp"
#include "salscp/sals.hpp"
#include "salscp/sources.hpp"
#include "salscp/trace.hpp"

namespace salscp {

/// Thrown for malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SourceSpec {
  SourceKind kind = SourceKind::PerturbedCp;
  std::vector<std::size_t> shape{30, 40, 50};
  /// Rank of the PerturbedCp truth model.
  std::size_t rank = 5;
  double delta = 1.0;
  double gamma = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t truth_seed = 0;

  Shape make_shape() const;
  KruskalModel truth() const;
  /// Source whose stream is seeded by `seed` instead of this->seed.
  TensorSource make(std::uint64_t seed) const;
  TensorSource make() const { return make(seed); }
};

struct SolverSpec {
  RegWeight lambda{1e-3};
  std::size_t rank = 5;
  StepSchedule schedule;
  std::vector<std::size_t> batch_sizes{1};
  std::size_t max_blocks = 100;
  std::uint64_t seed = 0;
  std::size_t als_sweeps = 100;
  double tol = 1e-8;
  bool check_bounds = false;
  bool record_gradient = false;
};

enum class ExperimentKind { Convergence, Sparsity, Efficiency };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);
SourceKind parse_source_kind(const std::string& name);
std::string to_string(SourceKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Convergence;
  SourceSpec source;
  SolverSpec solver;
  /// Total samples per arm (efficiency).
  std::size_t budget = 10000;
  std::size_t replicates = 1;
  std::filesystem::path output_dir = "out";
  bool record_wall_time = true;

  void validate() const;

  /// JSON object with keys experiment, source{...}, solver{...}, budget,
  /// replicates, output, record_wall_time. Missing keys keep their defaults.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
};

/// Reads just the source block of a config file. The file may hold a full
/// experiment config or a bare source object.
SourceSpec load_source_spec(const std::filesystem::path& path);

/// Per-replicate seeds. Arms within a replicate share both.
std::uint64_t replicate_source_seed(const ExperimentConfig& cfg, std::size_t replicate);
std::uint64_t replicate_init_seed(const ExperimentConfig& cfg, std::size_t replicate);

struct SummaryRow {
  std::string arm;
  std::size_t k = 0;
  std::size_t cumulative_samples = 0;
  double cumulative_cost_units = 0.0;
  double mean_exact_residual = 0.0;
};

struct ConvergenceResult {
  std::vector<TraceRow> als;
  std::vector<TraceRow> constant;
  std::vector<TraceRow> decreasing;
  std::vector<SummaryRow> summary;
};

struct SparsityRow {
  std::size_t m = 0;
  std::size_t replicate = 0;
  std::size_t nnz = 0;
  double expected_nnz = 0.0;
  double nnz_sd = 0.0;
  double sampling_error = 0.0;
};

struct SparsitySummaryRow {
  std::size_t m = 0;
  double mean_nnz = 0.0;
  double expected_nnz = 0.0;
  double nnz_sd = 0.0;
  double mean_sampling_error = 0.0;
};

struct SparsityResult {
  std::vector<SparsityRow> rows;
  std::vector<SparsitySummaryRow> summary;
  /// Least-squares slope of log(mean_sampling_error) against log(m); NaN with
  /// fewer than two batch sizes.
  double slope = 0.0;
  double intercept = 0.0;
};

struct EfficiencyArm {
  std::size_t m = 0;
  std::size_t blocks = 0;
  std::vector<TraceRow> trace;
  double mean_terminal_residual = 0.0;
};

struct EfficiencyResult {
  std::vector<EfficiencyArm> arms;
  std::vector<SummaryRow> summary;
};

/// ALS on E[X] plus SALS under Constant(c) and Decreasing(c) for every replicate.
/// Writes convergence_als.csv, convergence_constant.csv, convergence_decreasing.csv
/// and convergence_summary.csv into cfg.output_dir.
ConvergenceResult run_convergence(const ExperimentConfig& cfg);

/// nnz and sampling error of batch averages for each batch size. Writes
/// sparsity.csv, sparsity_summary.csv and sparsity_fit.csv.
SparsityResult run_sparsity(const ExperimentConfig& cfg);

/// SALS with K = budget / m blocks per batch size. Writes efficiency_m<m>.csv
/// per arm and efficiency_summary.csv.
EfficiencyResult run_efficiency(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
void run_experiment(const ExperimentConfig& cfg);

/// Slope and intercept of the least-squares line through (x, y).
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace salscp
