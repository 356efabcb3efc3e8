#pragma once

#include <filesystem>
#include <iosfwd>

#include "salscp/tensor.hpp"

namespace salscp {

// COO text format:
//   p n_1 ... n_p nnz
//   i_1 ... i_p value        (nnz lines, 0-based indices)
// Lines starting with '#' and blank lines are skipped. Duplicate indices are
// merged by summation.

SparseTensor read_coo(std::istream& in);
SparseTensor read_coo(const std::filesystem::path& path);

/// Writes values with 17 significant digits so reading back is exact.
void write_coo(std::ostream& out, const SparseTensor& t);
void write_coo(const std::filesystem::path& path, const SparseTensor& t);

}  // namespace salscp
