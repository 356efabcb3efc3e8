#include "salscp/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "salscp/errors.hpp"

namespace salscp {
namespace {

void put_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

template <typename T>
T parse_field(std::string_view f, std::size_t line) {
  T v{};
  const char* first = f.data();
  if (!f.empty() && f.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), v);
  if (ec != std::errc{} || ptr != f.data() + f.size()) {
    throw ParseError("trace line " + std::to_string(line) + ": bad field '" + std::string(f) + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << kTraceHeader << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.replicate << ',' << r.k << ',' << r.mode << ',' << r.alpha << ',' << r.sampled_objective << ',';
    put_optional(out, r.exact_residual);
    out << ',';
    put_optional(out, r.grad_norm);
    out << ',' << r.batch_nnz << ',' << r.cumulative_samples << ',' << r.cumulative_cost_units << ',' << r.wall_ns
        << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace_csv(out, rows);
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw ParseError("trace: missing or unexpected header");
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 11) throw ParseError("trace line " + std::to_string(line_no) + ": expected 11 fields");
    TraceRow r;
    r.replicate = parse_field<std::size_t>(f[0], line_no);
    r.k = parse_field<std::size_t>(f[1], line_no);
    r.mode = parse_field<std::size_t>(f[2], line_no);
    r.alpha = parse_field<double>(f[3], line_no);
    r.sampled_objective = parse_field<double>(f[4], line_no);
    if (!f[5].empty()) r.exact_residual = parse_field<double>(f[5], line_no);
    if (!f[6].empty()) r.grad_norm = parse_field<double>(f[6], line_no);
    r.batch_nnz = parse_field<std::size_t>(f[7], line_no);
    r.cumulative_samples = parse_field<std::size_t>(f[8], line_no);
    r.cumulative_cost_units = parse_field<double>(f[9], line_no);
    r.wall_ns = parse_field<std::int64_t>(f[10], line_no);
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_trace_csv(in);
}

}  // namespace salscp
