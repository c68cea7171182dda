#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mmf/core.hpp"

namespace mmf {

/// Ordered wavelet indices, c per level, all distinct.
struct Candidate {
  std::vector<int> order;
};

void validate_candidate(const Candidate& cand, int n, int L, int c);

/// The `count` indices j in active \ {wavelet} whose rows are closest to the
/// wavelet row in Euclidean distance, restricted to columns in the active
/// set. Ties broken by ascending index; nearest first.
std::vector<int> nearest_rows(const SymmetricMatrix& a,
                              const std::vector<int>& active, int wavelet,
                              int count);

/// Optional per-level rotation source for build_selection: given the level,
/// the chosen support and the current (partially rotated) matrix, returns the
/// k x k core applied before the next level picks its supports. When absent,
/// supports are measured against the original matrix.
using RotationProvider = std::function<Matrix(
    int level, const std::vector<int>& support, const Matrix& context)>;

/// Builds the nested selection for a candidate: T_l = next c candidate
/// indices, I_l = the k - c rows nearest to the level's first wavelet row.
NestedSelection build_selection(const Candidate& cand, const SymmetricMatrix& a,
                                int L, int k, int c,
                                const RotationProvider& provider = nullptr);

/// Deterministic candidate: each level drops the active index whose row
/// carries the least off-diagonal energy within the active set.
Candidate heuristic_candidate(const SymmetricMatrix& a, int L, int c);

/// Classic baseline, k = 2, c = 1: per level an exhaustive scan over active
/// pairs picks the Givens rotation that adds the least residual; the wavelet
/// is the rotated row with the smaller off-diagonal energy.
MmfFactorization greedy_jacobi_mmf(const SymmetricMatrix& a, int L);

/// Uniform ordered sample of L*c distinct indices; deterministic given seed.
Candidate random_candidate(int n, int L, int c, std::uint64_t seed);

}  // namespace mmf
