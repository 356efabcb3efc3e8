#include <cstdint>
#include <malloc.h>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "salscp/als.hpp"
#include "salscp/coo_io.hpp"
#include "salscp/errors.hpp"
#include "salscp/experiment.hpp"
#include "salscp/factor_io.hpp"
#include "salscp/sals.hpp"
#include "salscp/sources.hpp"
#include "salscp/trace.hpp"

namespace fs = std::filesystem;
using namespace salscp;

namespace {

constexpr int kUsageError = 1;
constexpr int kNumericalError = 2;

struct DecomposeArgs {
  fs::path input;
  std::size_t rank = 1;
  double reg = 1e-3;
  std::size_t sweeps = 100;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  fs::path out;
  fs::path trace;
  bool no_wall_time = false;
};

struct SalsArgs {
  fs::path source;
  std::size_t rank = 1;
  double reg = 1e-3;
  std::string step = "decr:1";
  std::size_t batch = 1;
  std::size_t blocks = 100;
  std::uint64_t seed = 0;
  fs::path trace;
  fs::path out;
  bool check_bounds = false;
  bool gradient = false;
  bool no_wall_time = false;
};

struct ExperimentArgs {
  std::string kind;
  fs::path config;
  fs::path out;
  bool no_wall_time = false;
};

int run_decompose(const DecomposeArgs& a) {
  const Tensor x = read_coo(a.input);
  AlsConfig cfg;
  cfg.lambda = RegWeight(a.reg);
  cfg.max_sweeps = a.sweeps;
  cfg.tol_grad = a.tol;
  cfg.seed = a.seed;
  cfg.record_wall_time = !a.no_wall_time;
  const AlsResult result = als_run(x, cfg, a.rank);
  if (!a.trace.empty()) write_trace_csv(a.trace, result.trace);
  if (!a.out.empty()) write_factors(a.out, result.model);
  const TraceRow& last = result.trace.back();
  std::printf("sweeps %zu converged %s objective %.17g grad_norm %.17g\n", last.k, result.converged ? "yes" : "no",
              last.sampled_objective, last.grad_norm.value_or(0.0));
  return 0;
}

int run_sals(const SalsArgs& a) {
  const SourceSpec spec = load_source_spec(a.source);
  TensorSource src = spec.make();
  SalsConfig cfg;
  cfg.lambda = RegWeight(a.reg);
  cfg.rank = a.rank;
  cfg.schedule = StepSchedule::parse(a.step);
  cfg.batch_size = a.batch;
  cfg.max_blocks = a.blocks;
  cfg.seed = a.seed;
  cfg.check_bounds = a.check_bounds;
  cfg.record_gradient = a.gradient;
  cfg.record_wall_time = !a.no_wall_time;
  const SalsResult result = sals_run(src, cfg);
  if (!a.trace.empty()) write_trace_csv(a.trace, result.trace);
  if (!a.out.empty()) write_factors(a.out, result.model);
  const TraceRow& last = result.trace.back();
  std::printf("blocks %zu samples %zu exact_residual %.17g bound_violations %zu\n", last.k, last.cumulative_samples,
              last.exact_residual.value_or(0.0), result.monitor.violations());
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = ExperimentConfig::load(a.config);
  cfg.experiment = parse_experiment_kind(a.kind);
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (a.no_wall_time) cfg.record_wall_time = false;
  run_experiment(cfg);
  std::printf("%s written to %s\n", to_string(cfg.experiment).c_str(), cfg.output_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Tensor-sized buffers stay on the heap between blocks.
  mallopt(M_MMAP_THRESHOLD, 64 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);

  CLI::App app{"CP decomposition of random tensors by regularized ALS and stochastic ALS"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* decompose = app.add_subcommand("decompose", "Regularized ALS on a tensor read from a COO file");
  decompose->add_option("--input", dec.input, "COO tensor file")->required()->check(CLI::ExistingFile);
  decompose->add_option("--rank", dec.rank, "CP rank")->required()->check(CLI::PositiveNumber);
  decompose->add_option("--reg", dec.reg, "Regularization weight lambda")->capture_default_str();
  decompose->add_option("--sweeps", dec.sweeps, "Maximum number of sweeps")->capture_default_str();
  decompose->add_option("--tol", dec.tol, "Gradient norm tolerance")->capture_default_str();
  decompose->add_option("--seed", dec.seed, "Initialization seed")->capture_default_str();
  decompose->add_option("--out", dec.out, "Directory for the factor matrices");
  decompose->add_option("--trace", dec.trace, "Trace CSV path");
  decompose->add_flag("--no-wall-time", dec.no_wall_time, "Write 0 in the wall_ns column");

  SalsArgs sa;
  auto* sals = app.add_subcommand("sals", "Stochastic ALS on samples from a configured source");
  sals->add_option("--source", sa.source, "Config file holding a source block")->required()->check(CLI::ExistingFile);
  sals->add_option("--rank", sa.rank, "CP rank")->required()->check(CLI::PositiveNumber);
  sals->add_option("--reg", sa.reg, "Regularization weight lambda")->capture_default_str();
  sals->add_option("--step", sa.step, "Step schedule const:<c> or decr:<c>")->capture_default_str();
  sals->add_option("--batch", sa.batch, "Samples per block")->capture_default_str();
  sals->add_option("--blocks", sa.blocks, "Number of block iterations")->capture_default_str();
  sals->add_option("--seed", sa.seed, "Initialization seed")->capture_default_str();
  sals->add_option("--trace", sa.trace, "Trace CSV path");
  sals->add_option("--out", sa.out, "Directory for the factor matrices");
  sals->add_flag("--check-bounds", sa.check_bounds, "Fail with exit code 2 if the iterate bound is violated");
  sals->add_flag("--gradient", sa.gradient, "Record the expected gradient norm per block");
  sals->add_flag("--no-wall-time", sa.no_wall_time, "Write 0 in the wall_ns column");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment and write its CSVs");
  experiment->add_option("kind", ea.kind, "convergence, sparsity or efficiency")
      ->required()
      ->check(CLI::IsMember({"convergence", "sparsity", "efficiency"}));
  experiment->add_option("--config", ea.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
  experiment->add_option("--out", ea.out, "Output directory (overrides the config)");
  experiment->add_flag("--no-wall-time", ea.no_wall_time, "Write 0 in the wall_ns column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*decompose) return run_decompose(dec);
    if (*sals) return run_sals(sa);
    return run_experiment_cmd(ea);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
}
