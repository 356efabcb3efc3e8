#include "salscp/sals.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "salscp/als.hpp"
#include "salscp/errors.hpp"
#include "salscp/kernels.hpp"

namespace salscp {

StepSchedule StepSchedule::constant(double c) {
  StepSchedule s{Rule::Constant, c};
  s.validate();
  return s;
}

StepSchedule StepSchedule::decreasing(double c) {
  StepSchedule s{Rule::Decreasing, c};
  s.validate();
  return s;
}

StepSchedule StepSchedule::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("step schedule must be const:<c> or decr:<c>");
  const std::string rule = text.substr(0, colon);
  const std::string value = text.substr(colon + 1);
  double c = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), c);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw std::invalid_argument("step schedule: bad constant '" + value + "'");
  }
  if (rule == "const") return constant(c);
  if (rule == "decr") return decreasing(c);
  throw std::invalid_argument("step schedule: unknown rule '" + rule + "'");
}

std::string StepSchedule::to_string() const {
  std::ostringstream os;
  os << (rule == Rule::Constant ? "const:" : "decr:") << c;
  return os.str();
}

void StepSchedule::validate() const {
  if (!(c > 0.0 && c <= 2.0)) throw std::invalid_argument("step schedule: c must lie in (0, 2]");
  if (rule == Rule::Constant && c > 1.0) throw std::invalid_argument("step schedule: constant rule needs c <= 1");
}

double StepSchedule::alpha(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("step schedule: block index starts at 1");
  return rule == Rule::Constant ? c : c / static_cast<double>(k);
}

void SalsConfig::validate() const {
  lambda.require_positive();
  schedule.validate();
  if (rank == 0) throw std::invalid_argument("SalsConfig: rank must be at least 1");
  if (batch_size == 0) throw std::invalid_argument("SalsConfig: batch size must be at least 1");
  if (max_blocks == 0) throw std::invalid_argument("SalsConfig: max_blocks must be at least 1");
}

BoundMonitor::BoundMonitor(const KruskalModel& initial) : worst_margin_(-std::numeric_limits<double>::infinity()) {
  for (const auto& a : initial.factors()) initial_norms_.push_back(frobenius_norm(a));
}

void BoundMonitor::observe_radius(double r) { running_max_radius_ = std::max(running_max_radius_, r); }

double BoundMonitor::bound(std::size_t mode) const {
  return std::max(initial_norms_.at(mode), running_max_radius_) + kSlack;
}

bool BoundMonitor::check(std::size_t mode, double norm) {
  ++checks_;
  const double margin = norm - bound(mode);
  worst_margin_ = std::max(worst_margin_, margin);
  if (margin > 0.0) {
    ++violations_;
    return false;
  }
  return true;
}

Tensor batch_average(std::span<const Tensor> batch) {
  if (batch.empty()) throw std::invalid_argument("batch_average: empty batch");
  const Shape& shape = shape_of(batch.front());
  const bool sparse = std::holds_alternative<SparseTensor>(batch.front());
  std::vector<double> acc(shape.size(), 0.0);
  for (const auto& t : batch) {
    if (!(shape_of(t) == shape)) throw std::invalid_argument("batch_average: shape mismatch");
    if (std::holds_alternative<SparseTensor>(t) != sparse) {
      throw std::invalid_argument("batch_average: cannot mix dense and sparse samples");
    }
    if (sparse) {
      const auto& s = std::get<SparseTensor>(t);
      const auto off = s.offsets();
      const auto v = s.values();
      for (std::size_t e = 0; e < s.nnz(); ++e) acc[off[e]] += v[e];
    } else {
      const auto v = std::get<DenseTensor>(t).values();
      for (std::size_t e = 0; e < v.size(); ++e) acc[e] += v[e];
    }
  }
  const double m = static_cast<double>(batch.size());
  for (double& v : acc) v /= m;
  DenseTensor avg(shape, std::move(acc));
  if (sparse) return SparseTensor::from_dense(avg);
  return avg;
}

double radius_from_mean_square(double mean_squared_norm, RegWeight w) {
  w.require_positive();
  return std::sqrt(mean_squared_norm / w.lambda);
}

double radius(std::span<const Tensor> batch, RegWeight w) {
  if (batch.empty()) throw std::invalid_argument("radius: empty batch");
  double total = 0.0;
  for (const auto& t : batch) total += squared_norm(t);
  return radius_from_mean_square(total / static_cast<double>(batch.size()), w);
}

KruskalModel sals_block(const KruskalModel& m, std::span<const Tensor> batch, const SalsConfig& cfg, std::size_t k) {
  cfg.validate();
  const Tensor avg = batch_average(batch);
  KruskalModel out = m;
  detail::relaxed_sweep(out, avg, cfg.lambda, cfg.schedule.alpha(k));
  return out;
}

namespace {

// f~(x; batch) = 1/2 (1/m) sum_l ||X^l - [[x]]||^2 + lambda/2 ||x||^2, written
// through the batch average: 1/2 (ms - ||X~||^2) + 1/2 ||X~ - [[x]]||^2 + reg.
// For sparse X~ the residual is expanded with <X~, [[x]]> taken from the last
// sweep's MTTKRP.
double sampled_objective(const KruskalModel& m, const BatchDraw& draw, const Matrix& last_proj, RegWeight w) {
  const double avg_sq = squared_norm(draw.average);
  double residual;
  if (std::holds_alternative<DenseTensor>(draw.average)) {
    residual = 0.5 * (draw.mean_squared_norm - avg_sq) + 0.5 * squared_residual(draw.average, m);
  } else {
    const auto pv = last_proj.values();
    const auto av = m.factor(m.order() - 1).values();
    double inner = 0.0;
    for (std::size_t e = 0; e < pv.size(); ++e) inner += pv[e] * av[e];
    residual = 0.5 * (draw.mean_squared_norm - 2.0 * inner + reconstruction_squared_norm(m));
  }
  return residual + 0.5 * w.lambda * m.squared_norm();
}

}  // namespace

SalsResult sals_run(TensorSource& source, const SalsConfig& cfg, const std::optional<KruskalModel>& init) {
  cfg.validate();
  KruskalModel model = init ? *init : random_model(source.shape(), cfg.rank, cfg.seed);
  if (!(model.shape() == source.shape())) throw std::invalid_argument("sals_run: initial model shape mismatch");
  if (model.rank() != cfg.rank) throw std::invalid_argument("sals_run: initial model rank mismatch");

  SalsResult result{model, {}, BoundMonitor(model), cfg.schedule.bound_applies()};
  result.trace.reserve(cfg.max_blocks);
  const CostModel cost = source.cost_model();
  const double block_cost = cost_per_block(cost, cfg.batch_size);
  const auto start = std::chrono::steady_clock::now();
  std::size_t samples = 0;

  for (std::size_t k = 1; k <= cfg.max_blocks; ++k) {
    const BatchDraw draw = source.draw_average(cfg.batch_size);
    result.monitor.observe_radius(radius_from_mean_square(draw.mean_squared_norm, cfg.lambda));
    const double alpha = cfg.schedule.alpha(k);

    const Matrix last_proj = detail::relaxed_sweep(model, draw.average, cfg.lambda, alpha, [&](std::size_t mode) {
      if (!result.monitored) return;
      const double norm = frobenius_norm(model.factor(mode));
      if (!result.monitor.check(mode, norm) && cfg.check_bounds) {
        std::ostringstream os;
        os.precision(17);
        os << "iterate bound violated at block " << k << ", mode " << mode << ": ||A|| = " << norm
           << " > bound " << result.monitor.bound(mode);
        throw MonitorViolation(os.str());
      }
    });

    samples += cfg.batch_size;
    TraceRow row;
    row.replicate = cfg.replicate;
    row.k = k;
    row.alpha = alpha;
    row.sampled_objective = sampled_objective(model, draw, last_proj, cfg.lambda);
    row.exact_residual = exact_residual(model, source.moments());
    if (cfg.record_gradient) row.grad_norm = expected_gradient_norm(model, source.moments(), cfg.lambda);
    row.batch_nnz = nnz_of(draw.average);
    row.cumulative_samples = samples;
    row.cumulative_cost_units = static_cast<double>(k) * block_cost;
    if (cfg.record_wall_time) {
      row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    }
    result.trace.push_back(row);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace salscp
