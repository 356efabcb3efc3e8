#pragma once

#include <filesystem>

#include "salscp/kruskal.hpp"

namespace salscp {

// A model directory holds an index file `model.txt` with the single line
// `p r n_1 ... n_p`, and one file `factor_<i>.txt` per mode (i = 1..p) with
// header `n_i r` followed by n_i rows of r values.

void write_factors(const std::filesystem::path& dir, const KruskalModel& m);
KruskalModel read_factors(const std::filesystem::path& dir);

}  // namespace salscp
