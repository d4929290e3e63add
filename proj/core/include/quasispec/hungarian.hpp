#pragma once

#include <vector>

namespace quasispec {

/// Minimum-cost assignment for an n×m cost matrix (row-major, n ≤ m).
/// Returns the column assigned to each row.
std::vector<int> hungarian(const std::vector<double>& cost, int rows, int cols);

}  // namespace quasispec
