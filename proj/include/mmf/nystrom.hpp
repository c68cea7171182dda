#pragma once

#include <cstdint>
#include <vector>

#include "mmf/core.hpp"

namespace mmf {

struct NystromResult {
  std::vector<int> selected_columns;  // sorted, distinct, size d
  double error = 0.0;                 // ||A - C W^+ C^T||_F
};

/// Uniform column sampling without replacement; W^+ through a symmetric
/// eigendecomposition with relative cutoff 1e-10.
NystromResult nystrom(const SymmetricMatrix& a, int d, std::uint64_t seed);

}  // namespace mmf
