#include "mmf/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mmf/log.hpp"

namespace mmf {

namespace detail {

std::vector<int> checked_index_set(const std::vector<int>& idx, int n,
                                   const char* what) {
  std::vector<int> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= n) {
      std::ostringstream os;
      os << what << ": index " << sorted[i] << " out of range [0, " << n << ")";
      throw std::invalid_argument(os.str());
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      std::ostringstream os;
      os << what << ": duplicate index " << sorted[i];
      throw std::invalid_argument(os.str());
    }
  }
  return sorted;
}

void rotate_sym_inplace(Matrix& b, const std::vector<int>& support,
                        const Matrix& core) {
  const int k = static_cast<int>(support.size());
  const int n = static_cast<int>(b.rows());
  Matrix rows(k, n);
  for (int a = 0; a < k; ++a) rows.row(a) = b.row(support[a]);
  Matrix new_rows = core * rows;
  for (int a = 0; a < k; ++a) b.row(support[a]) = new_rows.row(a);

  Matrix cols(n, k);
  for (int a = 0; a < k; ++a) cols.col(a) = b.col(support[a]);
  Matrix new_cols = cols * core.transpose();
  for (int a = 0; a < k; ++a) b.col(support[a]) = new_cols.col(a);
}

void rotate_sym_inverse_inplace(Matrix& b, const std::vector<int>& support,
                                const Matrix& core) {
  rotate_sym_inplace(b, support, core.transpose());
}

std::vector<char> core_membership(int n, const std::vector<int>& s_l) {
  std::vector<char> in(n, 0);
  for (int i : s_l) in[i] = 1;
  return in;
}

double masked_residual(const Matrix& b, const std::vector<char>& in_core) {
  const int n = static_cast<int>(b.rows());
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(in_core[i] && in_core[j])) sum += 2.0 * b(i, j) * b(i, j);
  return sum;
}

}  // namespace detail

SymmetricMatrix::SymmetricMatrix(Matrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1)
    throw std::invalid_argument("SymmetricMatrix: entries must be square, n >= 1");
  n_ = static_cast<int>(entries.rows());
  double max_drift = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      max_drift = std::max(max_drift, std::abs(entries(i, j) - entries(j, i)));
      const double v = 0.5 * (entries(i, j) + entries(j, i));
      entries(i, j) = v;
      entries(j, i) = v;
    }
  }
  if (max_drift > kSymmetryWarnTol) {
    std::ostringstream os;
    os << "SymmetricMatrix: input asymmetry " << max_drift
       << " exceeds " << kSymmetryWarnTol << "; symmetrized by averaging";
    log::warn(os.str());
  }
  entries_ = std::move(entries);
}

KPointRotation::KPointRotation(int n_in, std::vector<int> support_in,
                               Matrix core_in)
    : n(n_in), support(std::move(support_in)), core(std::move(core_in)) {
  const int k = static_cast<int>(support.size());
  if (k < 2 || k > n)
    throw std::invalid_argument("KPointRotation: order must satisfy 2 <= k <= n");
  for (int a = 0; a < k; ++a) {
    if (support[a] < 0 || support[a] >= n)
      throw std::invalid_argument("KPointRotation: support index out of range");
    if (a > 0 && support[a] <= support[a - 1])
      throw std::invalid_argument(
          "KPointRotation: support must be strictly increasing");
  }
  if (core.rows() != k || core.cols() != k)
    throw std::invalid_argument("KPointRotation: core must be k x k");
}

double KPointRotation::orthogonality_error() const {
  const Matrix gram = core.transpose() * core;
  return (gram - Matrix::Identity(core.rows(), core.cols())).norm();
}

Matrix KPointRotation::materialize() const {
  Matrix u = Matrix::Identity(n, n);
  const int k = order();
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) u(support[a], support[b]) = core(a, b);
  return u;
}

KPointRotation KPointRotation::identity(int n, std::vector<int> support) {
  const int k = static_cast<int>(support.size());
  return KPointRotation(n, std::move(support), Matrix::Identity(k, k));
}

CoreDiagonalMatrix::CoreDiagonalMatrix(int n_in, std::vector<int> core_idx,
                                       Matrix core_in, Vector diagonal_in)
    : n(n_in),
      core_indices(detail::checked_index_set(core_idx, n_in,
                                             "CoreDiagonalMatrix core_indices")),
      core(std::move(core_in)),
      diagonal(std::move(diagonal_in)) {
  const int s = static_cast<int>(core_indices.size());
  if (core.rows() != s || core.cols() != s)
    throw std::invalid_argument("CoreDiagonalMatrix: core must be |S| x |S|");
  if (diagonal.size() != n)
    throw std::invalid_argument("CoreDiagonalMatrix: diagonal must have n entries");
  const double drift = (core - core.transpose()).lpNorm<Eigen::Infinity>();
  if (drift > 1e-12)
    throw std::invalid_argument("CoreDiagonalMatrix: core asymmetry exceeds 1e-12");
  for (int a = 0; a < s; ++a)
    for (int b = a + 1; b < s; ++b) {
      const double v = 0.5 * (core(a, b) + core(b, a));
      core(a, b) = v;
      core(b, a) = v;
    }
}

Matrix CoreDiagonalMatrix::materialize() const {
  Matrix h = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) h(i, i) = diagonal(i);
  const int s = static_cast<int>(core_indices.size());
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) h(core_indices[a], core_indices[b]) = core(a, b);
  return h;
}

NestedSelection::NestedSelection(int n, std::vector<SelectionLevel> levels)
    : n_(n), levels_(std::move(levels)) {
  if (n_ < 1) throw std::invalid_argument("NestedSelection: n must be >= 1");
  std::vector<char> active(n_, 1);
  int active_count = n_;
  int c = -1, k = -1;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    SelectionLevel& level = levels_[l];
    std::sort(level.rotation_support.begin(), level.rotation_support.end());
    const std::vector<int> support = detail::checked_index_set(
        level.rotation_support, n_, "NestedSelection rotation_support");
    const std::vector<int> wavelets = detail::checked_index_set(
        level.wavelet_indices, n_, "NestedSelection wavelet_indices");
    if (c == -1) {
      c = static_cast<int>(wavelets.size());
      k = static_cast<int>(support.size());
    } else if (static_cast<int>(wavelets.size()) != c ||
               static_cast<int>(support.size()) != k) {
      throw std::invalid_argument(
          "NestedSelection: wavelet count and support size must be uniform");
    }
    if (wavelets.empty())
      throw std::invalid_argument("NestedSelection: empty wavelet set");
    for (int idx : support)
      if (!active[idx]) {
        std::ostringstream os;
        os << "NestedSelection: level " << l << " support index " << idx
           << " is not in the active set";
        throw std::invalid_argument(os.str());
      }
    for (int w : wavelets) {
      if (!std::binary_search(support.begin(), support.end(), w))
        throw std::invalid_argument(
            "NestedSelection: wavelet indices must lie in the rotation support");
      active[w] = 0;
      --active_count;
    }
  }
  if (active_count < 1)
    throw std::invalid_argument("NestedSelection: final core S_L must be non-empty");
}

int NestedSelection::wavelets_per_level() const {
  if (levels_.empty())
    throw std::logic_error("NestedSelection: no levels");
  return static_cast<int>(levels_.front().wavelet_indices.size());
}

int NestedSelection::rotation_order() const {
  if (levels_.empty())
    throw std::logic_error("NestedSelection: no levels");
  return static_cast<int>(levels_.front().rotation_support.size());
}

std::vector<int> NestedSelection::active_set(int level) const {
  if (level < 0 || level > depth())
    throw std::invalid_argument("NestedSelection: level out of range");
  std::vector<char> active(n_, 1);
  for (int l = 0; l < level; ++l)
    for (int w : levels_[l].wavelet_indices) active[w] = 0;
  std::vector<int> out;
  for (int i = 0; i < n_; ++i)
    if (active[i]) out.push_back(i);
  return out;
}

void MmfFactorization::validate() const {
  const int n = selection.size();
  if (static_cast<int>(rotations.size()) != selection.depth())
    throw std::invalid_argument(
        "MmfFactorization: rotation count does not match selection depth");
  for (int l = 0; l < selection.depth(); ++l) {
    const KPointRotation& u = rotations[l];
    if (u.n != n)
      throw std::invalid_argument("MmfFactorization: rotation dimension mismatch");
    if (u.support != selection.levels()[l].rotation_support)
      throw std::invalid_argument(
          "MmfFactorization: rotation support does not match the selection");
    const double err = u.orthogonality_error();
    if (err > kOrthogonalityTol) {
      std::ostringstream os;
      os << "MmfFactorization: rotation core at level " << l
         << " violates orthogonality (error " << err << ")";
      throw std::invalid_argument(os.str());
    }
  }
  if (h.n != n)
    throw std::invalid_argument("MmfFactorization: core-diagonal dimension mismatch");
  if (h.core_indices != selection.final_core())
    throw std::invalid_argument(
        "MmfFactorization: h core indices do not match S_L");
}

SymmetricMatrix apply_rotation(const SymmetricMatrix& a, const KPointRotation& u) {
  if (u.n != a.size())
    throw std::invalid_argument("apply_rotation: dimension mismatch");
  const double err = u.orthogonality_error();
  if (err > kOrthogonalityTol) {
    std::ostringstream os;
    os << "apply_rotation: core violates orthogonality (error " << err << ")";
    throw std::invalid_argument(os.str());
  }
  Matrix b = a.data();
  detail::rotate_sym_inplace(b, u.support, u.core);
  return SymmetricMatrix(std::move(b));
}

double residual_norm_sq(const SymmetricMatrix& b, const std::vector<int>& s_l) {
  const std::vector<int> sorted =
      detail::checked_index_set(s_l, b.size(), "residual_norm_sq s_l");
  return detail::masked_residual(b.data(),
                                 detail::core_membership(b.size(), sorted));
}

CoreDiagonalMatrix core_diagonal_project(const SymmetricMatrix& b,
                                         const std::vector<int>& s_l) {
  const int n = b.size();
  const std::vector<int> sorted =
      detail::checked_index_set(s_l, n, "core_diagonal_project s_l");
  const int s = static_cast<int>(sorted.size());
  Matrix core(s, s);
  for (int a = 0; a < s; ++a)
    for (int c = 0; c < s; ++c) core(a, c) = b(sorted[a], sorted[c]);
  Vector diag = Vector::Zero(n);
  const std::vector<char> in = detail::core_membership(n, sorted);
  for (int i = 0; i < n; ++i)
    if (!in[i]) diag(i) = b(i, i);
  return CoreDiagonalMatrix(n, sorted, std::move(core), std::move(diag));
}

SymmetricMatrix assemble(const MmfFactorization& f) {
  f.validate();
  Matrix m = f.h.materialize();
  for (int l = f.selection.depth() - 1; l >= 0; --l)
    detail::rotate_sym_inverse_inplace(m, f.rotations[l].support,
                                       f.rotations[l].core);
  return SymmetricMatrix(std::move(m));
}

double factorization_error(const SymmetricMatrix& a, const MmfFactorization& f) {
  if (a.size() != f.selection.size())
    throw std::invalid_argument("factorization_error: dimension mismatch");
  return (a.data() - assemble(f).data()).norm();
}

Matrix polar_orthonormalize(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix givens_rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Matrix o(2, 2);
  o << c, s, -s, c;
  return o;
}

std::vector<KPointRotation> identity_rotations(const NestedSelection& sel) {
  std::vector<KPointRotation> out;
  out.reserve(sel.depth());
  for (const SelectionLevel& level : sel.levels())
    out.push_back(KPointRotation::identity(sel.size(), level.rotation_support));
  return out;
}

}  // namespace mmf
