#include "salscp/factor_io.hpp"

#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "salscp/errors.hpp"
#include "text_parse.hpp"

namespace salscp {
namespace {

std::filesystem::path factor_path(const std::filesystem::path& dir, std::size_t mode) {
  return dir / ("factor_" + std::to_string(mode + 1) + ".txt");
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError("cannot open " + p.string());
  return in;
}

}  // namespace

void write_factors(const std::filesystem::path& dir, const KruskalModel& m) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream idx(dir / "model.txt");
    if (!idx) throw std::runtime_error("cannot write " + (dir / "model.txt").string());
    idx << m.order() << ' ' << m.rank();
    for (auto n : m.shape().dims()) idx << ' ' << n;
    idx << '\n';
  }
  for (std::size_t mode = 0; mode < m.order(); ++mode) {
    std::ofstream out(factor_path(dir, mode));
    if (!out) throw std::runtime_error("cannot write " + factor_path(dir, mode).string());
    const Matrix& a = m.factor(mode);
    out << a.rows() << ' ' << a.cols() << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
      out << '\n';
    }
  }
}

KruskalModel read_factors(const std::filesystem::path& dir) {
  auto idx_in = open_in(dir / "model.txt");
  detail::LineReader idx(idx_in, "model index");
  std::vector<std::string_view> tok;
  if (!idx.next(tok) || tok.size() < 2) throw ParseError("model index: expected 'p r n_1 ... n_p'");
  const auto p = idx.parse_size(tok[0]);
  const auto r = idx.parse_size(tok[1]);
  if (tok.size() != p + 2) idx.fail("expected 'p r n_1 ... n_p'");
  std::vector<std::size_t> dims(p);
  for (std::size_t m = 0; m < p; ++m) dims[m] = idx.parse_size(tok[2 + m]);

  std::vector<Matrix> factors;
  for (std::size_t mode = 0; mode < p; ++mode) {
    auto in = open_in(factor_path(dir, mode));
    detail::LineReader reader(in, factor_path(dir, mode).filename().string());
    if (!reader.next(tok) || tok.size() != 2) reader.fail("expected header 'n_i r'");
    if (reader.parse_size(tok[0]) != dims[mode] || reader.parse_size(tok[1]) != r) {
      reader.fail("header disagrees with model index");
    }
    std::vector<double> values;
    values.reserve(dims[mode] * r);
    for (std::size_t i = 0; i < dims[mode]; ++i) {
      if (!reader.next(tok)) reader.fail("missing rows");
      if (tok.size() != r) reader.fail("expected " + std::to_string(r) + " values");
      for (auto t : tok) values.push_back(reader.parse_double(t));
    }
    factors.emplace_back(dims[mode], r, std::move(values));
  }
  return KruskalModel(std::move(factors));
}

}  // namespace salscp
