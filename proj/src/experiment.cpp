#include "salscp/experiment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "salscp/als.hpp"
#include "salscp/cost_model.hpp"
#include "salscp/kernels.hpp"
#include "salscp/random.hpp"

namespace salscp {

using nlohmann::json;

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "convergence") return ExperimentKind::Convergence;
  if (name == "sparsity") return ExperimentKind::Sparsity;
  if (name == "efficiency") return ExperimentKind::Efficiency;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::Sparsity: return "sparsity";
    case ExperimentKind::Efficiency: return "efficiency";
  }
  return {};
}

SourceKind parse_source_kind(const std::string& name) {
  if (name == "perturbed_cp") return SourceKind::PerturbedCp;
  if (name == "sparse_random") return SourceKind::SparseRandom;
  throw ConfigError("unknown source kind '" + name + "'");
}

std::string to_string(SourceKind kind) {
  return kind == SourceKind::PerturbedCp ? "perturbed_cp" : "sparse_random";
}

Shape SourceSpec::make_shape() const {
  try {
    return Shape(shape);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("source.shape: ") + e.what());
  }
}

KruskalModel SourceSpec::truth() const { return random_model(make_shape(), rank, truth_seed); }

TensorSource SourceSpec::make(std::uint64_t stream_seed) const {
  if (kind == SourceKind::PerturbedCp) return perturbed_cp_source(truth(), delta, stream_seed);
  return sparse_random_source(make_shape(), gamma, stream_seed);
}

void ExperimentConfig::validate() const {
  const Shape shape = source.make_shape();
  (void)shape;
  if (source.kind == SourceKind::PerturbedCp && source.rank == 0) throw ConfigError("source.rank must be at least 1");
  if (!(source.delta >= 0.0) || !std::isfinite(source.delta)) throw ConfigError("source.delta must be >= 0");
  if (!(source.gamma >= 0.0 && source.gamma <= 1.0)) throw ConfigError("source.gamma must lie in [0, 1]");
  if (solver.rank == 0) throw ConfigError("solver.rank must be at least 1");
  if (solver.max_blocks == 0) throw ConfigError("solver.max_blocks must be at least 1");
  if (!(solver.tol >= 0.0)) throw ConfigError("solver.tol must be >= 0");
  if (solver.batch_sizes.empty()) throw ConfigError("solver.batch_sizes must not be empty");
  if (replicates == 0) throw ConfigError("replicates must be at least 1");
  try {
    solver.lambda.require_positive();
    solver.schedule.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::size_t largest = 0;
  for (std::size_t m : solver.batch_sizes) {
    if (m == 0) throw ConfigError("batch sizes must be at least 1");
    largest = std::max(largest, m);
    if (experiment == ExperimentKind::Efficiency && budget % m != 0) {
      throw ConfigError("budget " + std::to_string(budget) + " is not a multiple of batch size " + std::to_string(m));
    }
  }
  if (experiment == ExperimentKind::Efficiency && budget < largest) throw ConfigError("budget must be >= every batch size");
  if (experiment == ExperimentKind::Convergence && source.kind != SourceKind::PerturbedCp) {
    throw ConfigError("convergence experiment needs a perturbed_cp source");
  }
}

namespace {

template <typename T>
void read_key(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

const json& object_at(const json& obj, const char* key) {
  static const json empty = json::object();
  if (!obj.contains(key)) return empty;
  const json& v = obj.at(key);
  if (!v.is_object()) throw ConfigError(std::string("config key '") + key + "' must be an object");
  return v;
}

SourceSpec parse_source(const json& j) {
  SourceSpec s;
  std::string kind = to_string(s.kind);
  read_key(j, "kind", kind);
  s.kind = parse_source_kind(kind);
  read_key(j, "shape", s.shape);
  read_key(j, "rank", s.rank);
  read_key(j, "delta", s.delta);
  read_key(j, "gamma", s.gamma);
  read_key(j, "seed", s.seed);
  read_key(j, "truth_seed", s.truth_seed);
  return s;
}

SolverSpec parse_solver(const json& j) {
  SolverSpec s;
  double lambda = s.lambda.lambda;
  read_key(j, "lambda", lambda);
  std::string schedule = s.schedule.to_string();
  read_key(j, "schedule", schedule);
  try {
    s.lambda = RegWeight(lambda);
    s.schedule = StepSchedule::parse(schedule);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  read_key(j, "rank", s.rank);
  read_key(j, "batch_sizes", s.batch_sizes);
  read_key(j, "max_blocks", s.max_blocks);
  read_key(j, "seed", s.seed);
  read_key(j, "als_sweeps", s.als_sweeps);
  read_key(j, "tol", s.tol);
  read_key(j, "check_bounds", s.check_bounds);
  read_key(j, "record_gradient", s.record_gradient);
  return s;
}

json parse_json(const std::string& text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const json j = parse_json(text);
  ExperimentConfig cfg;
  std::string kind = to_string(cfg.experiment);
  read_key(j, "experiment", kind);
  cfg.experiment = parse_experiment_kind(kind);
  cfg.source = parse_source(object_at(j, "source"));
  cfg.solver = parse_solver(object_at(j, "solver"));
  read_key(j, "budget", cfg.budget);
  read_key(j, "replicates", cfg.replicates);
  std::string output = cfg.output_dir.string();
  read_key(j, "output", output);
  cfg.output_dir = output;
  read_key(j, "record_wall_time", cfg.record_wall_time);
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) { return from_json_text(slurp(path)); }

SourceSpec load_source_spec(const std::filesystem::path& path) {
  const json j = parse_json(slurp(path));
  SourceSpec s = j.contains("source") ? parse_source(object_at(j, "source")) : parse_source(j);
  try {
    if (s.kind == SourceKind::PerturbedCp) {
      if (s.rank == 0) throw ConfigError("source.rank must be at least 1");
      if (!(s.delta >= 0.0)) throw ConfigError("source.delta must be >= 0");
    } else if (!(s.gamma >= 0.0 && s.gamma <= 1.0)) {
      throw ConfigError("source.gamma must lie in [0, 1]");
    }
    (void)s.make_shape();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

std::uint64_t replicate_source_seed(const ExperimentConfig& cfg, std::size_t replicate) {
  return derive_seed(cfg.source.seed, replicate);
}

std::uint64_t replicate_init_seed(const ExperimentConfig& cfg, std::size_t replicate) {
  return derive_seed(cfg.solver.seed, replicate);
}

std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: length mismatch");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() < 2) return {nan, nan};
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) return {nan, nan};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  return out;
}

void write_summary(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  auto out = open_csv(path);
  out << "arm,k,cumulative_samples,cumulative_cost_units,mean_exact_residual\n";
  for (const auto& r : rows) {
    out << r.arm << ',' << r.k << ',' << r.cumulative_samples << ',' << r.cumulative_cost_units << ','
        << r.mean_exact_residual << '\n';
  }
}

// Replicate-averaged exact residual per block index. Every replicate of an arm
// runs the same number of blocks.
void append_summary(std::vector<SummaryRow>& out, const std::string& arm, std::span<const TraceRow> trace,
                    std::size_t replicates) {
  const std::size_t blocks = trace.size() / replicates;
  for (std::size_t b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) sum += trace[r * blocks + b].exact_residual.value_or(0.0);
    const TraceRow& first = trace[b];
    out.push_back({arm, first.k, first.cumulative_samples, first.cumulative_cost_units,
                   sum / static_cast<double>(replicates)});
  }
}

SalsConfig sals_config(const ExperimentConfig& cfg, std::size_t replicate, std::size_t m, std::size_t blocks,
                       const StepSchedule& schedule) {
  SalsConfig sc;
  sc.lambda = cfg.solver.lambda;
  sc.rank = cfg.solver.rank;
  sc.schedule = schedule;
  sc.batch_size = m;
  sc.max_blocks = blocks;
  sc.seed = replicate_init_seed(cfg, replicate);
  sc.check_bounds = cfg.solver.check_bounds;
  sc.record_gradient = cfg.solver.record_gradient;
  sc.record_wall_time = cfg.record_wall_time;
  sc.replicate = replicate;
  return sc;
}

void append(std::vector<TraceRow>& out, const std::vector<TraceRow>& rows) { out.insert(out.end(), rows.begin(), rows.end()); }

}  // namespace

ConvergenceResult run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  ConvergenceResult result;
  const std::size_t m = cfg.solver.batch_sizes.front();
  const double c = cfg.solver.schedule.c;
  if (c > 1.0) throw ConfigError("convergence experiment runs a constant arm, so the schedule constant must be <= 1");

  const KruskalModel truth = cfg.source.truth();
  const TensorSource noiseless = perturbed_cp_source(truth, 0.0, cfg.source.seed);
  const MomentModel& exact = noiseless.moments();

  AlsConfig ac;
  ac.lambda = cfg.solver.lambda;
  ac.max_sweeps = cfg.solver.als_sweeps;
  ac.tol_grad = cfg.solver.tol;
  ac.seed = replicate_init_seed(cfg, 0);
  ac.record_wall_time = cfg.record_wall_time;
  result.als = als_run(exact.mean, ac, cfg.solver.rank, std::nullopt,
                       [&exact](const KruskalModel& model) { return exact_residual(model, exact); })
                   .trace;

  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const std::uint64_t seed = replicate_source_seed(cfg, r);
    TensorSource constant_src = cfg.source.make(seed);
    append(result.constant,
           sals_run(constant_src, sals_config(cfg, r, m, cfg.solver.max_blocks, StepSchedule::constant(c))).trace);
    TensorSource decreasing_src = cfg.source.make(seed);
    append(result.decreasing,
           sals_run(decreasing_src, sals_config(cfg, r, m, cfg.solver.max_blocks, StepSchedule::decreasing(c))).trace);
  }

  append_summary(result.summary, "als", result.als, 1);
  append_summary(result.summary, "constant", result.constant, cfg.replicates);
  append_summary(result.summary, "decreasing", result.decreasing, cfg.replicates);

  write_trace_csv(cfg.output_dir / "convergence_als.csv", result.als);
  write_trace_csv(cfg.output_dir / "convergence_constant.csv", result.constant);
  write_trace_csv(cfg.output_dir / "convergence_decreasing.csv", result.decreasing);
  write_summary(cfg.output_dir / "convergence_summary.csv", result.summary);
  return result;
}

SparsityResult run_sparsity(const ExperimentConfig& cfg) {
  cfg.validate();
  SparsityResult result;
  std::vector<double> log_m, log_err;
  for (std::size_t m : cfg.solver.batch_sizes) {
    SparsitySummaryRow summary;
    summary.m = m;
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      TensorSource src = cfg.source.make(replicate_source_seed(cfg, r));
      const CostModel cost = src.cost_model();
      const BatchDraw draw = src.draw_average(m);
      SparsityRow row;
      row.m = m;
      row.replicate = r;
      row.nnz = nnz_of(draw.average);
      row.expected_nnz = expected_nnz(cost, m);
      row.nnz_sd = nnz_standard_deviation(cost, m);
      row.sampling_error = std::sqrt(squared_distance(draw.average, src.moments().mean_dense()));
      result.rows.push_back(row);
      summary.mean_nnz += static_cast<double>(row.nnz);
      summary.mean_sampling_error += row.sampling_error;
      summary.expected_nnz = row.expected_nnz;
      summary.nnz_sd = row.nnz_sd;
    }
    summary.mean_nnz /= static_cast<double>(cfg.replicates);
    summary.mean_sampling_error /= static_cast<double>(cfg.replicates);
    result.summary.push_back(summary);
    log_m.push_back(std::log(static_cast<double>(m)));
    log_err.push_back(std::log(summary.mean_sampling_error));
  }
  std::tie(result.slope, result.intercept) = linear_fit(log_m, log_err);

  auto rows = open_csv(cfg.output_dir / "sparsity.csv");
  rows << "m,replicate,nnz,expected_nnz,nnz_sd,sampling_error\n";
  for (const auto& r : result.rows) {
    rows << r.m << ',' << r.replicate << ',' << r.nnz << ',' << r.expected_nnz << ',' << r.nnz_sd << ','
         << r.sampling_error << '\n';
  }
  auto summary = open_csv(cfg.output_dir / "sparsity_summary.csv");
  summary << "m,mean_nnz,expected_nnz,nnz_sd,mean_sampling_error\n";
  for (const auto& s : result.summary) {
    summary << s.m << ',' << s.mean_nnz << ',' << s.expected_nnz << ',' << s.nnz_sd << ',' << s.mean_sampling_error
            << '\n';
  }
  auto fit = open_csv(cfg.output_dir / "sparsity_fit.csv");
  fit << "slope,intercept\n" << result.slope << ',' << result.intercept << '\n';
  return result;
}

EfficiencyResult run_efficiency(const ExperimentConfig& cfg) {
  cfg.validate();
  EfficiencyResult result;
  for (std::size_t m : cfg.solver.batch_sizes) {
    EfficiencyArm arm;
    arm.m = m;
    arm.blocks = cfg.budget / m;
    double terminal = 0.0;
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      TensorSource src = cfg.source.make(replicate_source_seed(cfg, r));
      SalsResult run = sals_run(src, sals_config(cfg, r, m, arm.blocks, cfg.solver.schedule));
      terminal += run.trace.back().exact_residual.value_or(0.0);
      append(arm.trace, run.trace);
    }
    arm.mean_terminal_residual = terminal / static_cast<double>(cfg.replicates);
    append_summary(result.summary, "m" + std::to_string(m), arm.trace, cfg.replicates);
    write_trace_csv(cfg.output_dir / ("efficiency_m" + std::to_string(m) + ".csv"), arm.trace);
    result.arms.push_back(std::move(arm));
  }
  write_summary(cfg.output_dir / "efficiency_summary.csv", result.summary);
  return result;
}

void run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::Convergence: run_convergence(cfg); break;
    case ExperimentKind::Sparsity: run_sparsity(cfg); break;
    case ExperimentKind::Efficiency: run_efficiency(cfg); break;
  }
}

}  // namespace salscp
