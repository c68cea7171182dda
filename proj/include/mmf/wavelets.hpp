#pragma once

#include <vector>

#include "mmf/core.hpp"

namespace mmf {

struct MotherTag {
  int row;    // row of the basis matrix
  int level;  // resolution level, 1-based
};

/// Orthogonal basis whose rows are wavelets: L mother wavelets (one per
/// level) and n - L father wavelets spanning the final approximation space.
struct WaveletBasis {
  int n = 0;
  Matrix matrix;  // n x n, rows are wavelets
  std::vector<MotherTag> mother_rows;
  std::vector<int> father_rows;
};

/// Rows of the cumulative rotation product: the mother wavelet of level l is
/// row T_l, father wavelets are the rows of S_L. Requires one wavelet per
/// level (c == 1); the assembled matrix is checked orthogonal within 1e-8.
WaveletBasis extract_basis(const MmfFactorization& f);

/// Wavelet coefficients W * signal.
Vector transform(const WaveletBasis& w, const Vector& signal);

/// Signal from coefficients, W^T * coefficients.
Vector inverse_transform(const WaveletBasis& w, const Vector& coefficients);

/// Fraction of entries with |value| > threshold.
double sparsity(const WaveletBasis& w, double threshold);

}  // namespace mmf
