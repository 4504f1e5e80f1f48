#pragma once

#include <cstddef>
#include <vector>

namespace oak {

struct Assignment {
  /// row -> column, or -1 for rows left out (only when rows > cols).
  std::vector<int> row_to_col;
  double value = 0.0;
};

/// Maximum-weight assignment on a dense rows×cols matrix (Hungarian method
/// with potentials, O(n²m)). min(rows, cols) pairs are always matched.
/// Deterministic: among optimal assignments the result depends only on the
/// matrix, never on memory layout.
Assignment max_weight_assignment(const std::vector<std::vector<double>>& weight);

}  // namespace oak
