#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace salscp {

/// One row per block iteration (SALS) or sweep (ALS), describing the iterate
/// after that block. `mode` is 0 for these block-level rows; 1..p is reserved
/// for per-mode rows.
struct TraceRow {
  std::size_t replicate = 0;
  std::size_t k = 0;
  std::size_t mode = 0;
  double alpha = 1.0;
  double sampled_objective = 0.0;
  std::optional<double> exact_residual;
  std::optional<double> grad_norm;
  std::size_t batch_nnz = 0;
  std::size_t cumulative_samples = 0;
  double cumulative_cost_units = 0.0;
  std::int64_t wall_ns = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

inline constexpr const char* kTraceHeader =
    "replicate,k,mode,alpha,sampled_objective,exact_residual,grad_norm,batch_nnz,cumulative_samples,"
    "cumulative_cost_units,wall_ns";

/// Comma-separated, header row first, reals with 17 significant digits,
/// missing optionals as empty fields.
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows);

std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

}  // namespace salscp
