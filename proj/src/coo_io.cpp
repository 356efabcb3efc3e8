#include "salscp/coo_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "salscp/errors.hpp"
#include "text_parse.hpp"

namespace salscp {

SparseTensor read_coo(std::istream& in) {
  detail::LineReader reader(in, "COO");
  std::vector<std::string_view> tok;
  if (!reader.next(tok)) throw ParseError("COO: missing header line");
  if (tok.empty()) reader.fail("empty header");
  const auto p = reader.parse_size(tok[0]);
  if (tok.size() != p + 2) reader.fail("header must be 'p n_1 ... n_p nnz'");
  std::vector<std::size_t> dims(p);
  for (std::size_t m = 0; m < p; ++m) dims[m] = reader.parse_size(tok[1 + m]);
  const auto nnz = reader.parse_size(tok[p + 1]);
  Shape shape = [&] {
    try {
      return Shape(dims);
    } catch (const std::exception& e) {
      reader.fail(e.what());
    }
  }();

  std::vector<std::size_t> indices;
  std::vector<double> values;
  indices.reserve(nnz * p);
  values.reserve(nnz);
  for (std::size_t e = 0; e < nnz; ++e) {
    if (!reader.next(tok)) throw ParseError("COO: expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
    if (tok.size() != p + 1) reader.fail("entry must be 'i_1 ... i_p value'");
    for (std::size_t m = 0; m < p; ++m) {
      const auto i = reader.parse_size(tok[m]);
      if (i >= dims[m]) reader.fail("index out of bounds in mode " + std::to_string(m));
      indices.push_back(i);
    }
    values.push_back(reader.parse_double(tok[p]));
  }
  if (reader.next(tok)) reader.fail("trailing data after " + std::to_string(nnz) + " entries");
  return SparseTensor::from_coordinates(std::move(shape), indices, values);
}

SparseTensor read_coo(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_coo(in);
}

void write_coo(std::ostream& out, const SparseTensor& t) {
  const Shape& s = t.shape();
  out << s.order();
  for (auto n : s.dims()) out << ' ' << n;
  out << ' ' << t.nnz() << '\n';
  out << std::setprecision(17);
  for (std::size_t e = 0; e < t.nnz(); ++e) {
    for (std::size_t m = 0; m < s.order(); ++m) out << t.mode_indices(m)[e] << ' ';
    out << t.values()[e] << '\n';
  }
}

void write_coo(const std::filesystem::path& path, const SparseTensor& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_coo(out, t);
}

}  // namespace salscp
