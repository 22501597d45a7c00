#pragma once

#include "lomatch/types.hpp"

#include <vector>

namespace lomatch {

/// Minimum-cost assignment on a square cost matrix (Jonker–Volgenant
/// shortest augmenting path, O(n^3)). Returns the assigned column for
/// each row.
std::vector<int> min_cost_assignment(const Matrix& cost);

}  // namespace lomatch
