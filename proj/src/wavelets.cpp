#include "mmf/wavelets.hpp"

#include <sstream>
#include <stdexcept>

namespace mmf {

WaveletBasis extract_basis(const MmfFactorization& f) {
  f.validate();
  const int n = f.selection.size();
  const int depth = f.selection.depth();
  for (const SelectionLevel& level : f.selection.levels())
    if (level.wavelet_indices.size() != 1)
      throw std::invalid_argument(
          "extract_basis: only one wavelet per level is supported (c == 1)");

  // Q_l = U_l ... U_1. Row T_l freezes once level l is applied, so the final
  // product already holds every mother wavelet.
  Matrix q = Matrix::Identity(n, n);
  for (int l = 0; l < depth; ++l) {
    const KPointRotation& u = f.rotations[l];
    const int k = u.order();
    Matrix rows(k, n);
    for (int a = 0; a < k; ++a) rows.row(a) = q.row(u.support[a]);
    Matrix new_rows = u.core * rows;
    for (int a = 0; a < k; ++a) q.row(u.support[a]) = new_rows.row(a);
  }

  WaveletBasis basis;
  basis.n = n;
  basis.matrix = std::move(q);
  for (int l = 0; l < depth; ++l)
    basis.mother_rows.push_back(
        MotherTag{f.selection.levels()[l].wavelet_indices[0], l + 1});
  basis.father_rows = f.selection.final_core();

  const double orth =
      (basis.matrix.transpose() * basis.matrix - Matrix::Identity(n, n)).norm();
  if (orth > 1e-8) {
    std::ostringstream os;
    os << "extract_basis: basis orthogonality error " << orth << " exceeds 1e-8";
    throw std::runtime_error(os.str());
  }
  return basis;
}

Vector transform(const WaveletBasis& w, const Vector& signal) {
  if (signal.size() != w.n)
    throw std::invalid_argument("transform: dimension mismatch");
  return w.matrix * signal;
}

Vector inverse_transform(const WaveletBasis& w, const Vector& coefficients) {
  if (coefficients.size() != w.n)
    throw std::invalid_argument("inverse_transform: dimension mismatch");
  return w.matrix.transpose() * coefficients;
}

double sparsity(const WaveletBasis& w, double threshold) {
  if (threshold < 0)
    throw std::invalid_argument("sparsity: threshold must be >= 0");
  long count = 0;
  for (int i = 0; i < w.n; ++i)
    for (int j = 0; j < w.n; ++j)
      if (std::abs(w.matrix(i, j)) > threshold) ++count;
  return static_cast<double>(count) / (static_cast<double>(w.n) * w.n);
}

}  // namespace mmf
