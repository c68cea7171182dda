#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerance for accepting a rotation core as orthogonal.
inline constexpr double kOrthogonalityTol = 1e-10;
// Asymmetry beyond this triggers a warning when constructing a SymmetricMatrix.
inline constexpr double kSymmetryWarnTol = 1e-8;

/// Dense symmetric n x n matrix. Input is symmetrized by averaging with its
/// transpose at construction; a warning is logged when the asymmetry exceeds
/// 1e-8 (file-format rounding is tolerated silently).
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(Matrix entries);

  int size() const { return n_; }
  const Matrix& data() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  int n_;
  Matrix entries_;
};

/// Elementary rotation of order k: identity outside a k-index support, a
/// k x k core on it. Stored sparsely; materialize() exists for oracles only.
struct KPointRotation {
  int n;
  std::vector<int> support;  // strictly increasing indices in [0, n)
  Matrix core;               // k x k

  KPointRotation(int n, std::vector<int> support, Matrix core);

  int order() const { return static_cast<int>(support.size()); }
  double orthogonality_error() const;  // ||core^T core - I||_F
  Matrix materialize() const;

  static KPointRotation identity(int n, std::vector<int> support);
};

/// Matrix that is zero off-diagonal except inside the core_indices x
/// core_indices block. Diagonal entries at core positions are unused.
struct CoreDiagonalMatrix {
  int n;
  std::vector<int> core_indices;  // sorted, distinct
  Matrix core;                    // |S| x |S|, symmetric
  Vector diagonal;                // n values, entries at core indices unused

  CoreDiagonalMatrix(int n, std::vector<int> core_indices, Matrix core,
                     Vector diagonal);

  Matrix materialize() const;
};

struct SelectionLevel {
  std::vector<int> wavelet_indices;  // c distinct indices, removed this level
  std::vector<int> rotation_support; // k sorted indices, superset of wavelets
};

/// Ordered per-level index choices: wavelet sets and rotation supports, with
/// the implied shrinking chain of active sets S_0 = [0,n) down to S_L.
class NestedSelection {
 public:
  NestedSelection(int n, std::vector<SelectionLevel> levels);

  int size() const { return n_; }
  int depth() const { return static_cast<int>(levels_.size()); }
  const std::vector<SelectionLevel>& levels() const { return levels_; }

  /// Wavelets removed per level; defined when depth() >= 1.
  int wavelets_per_level() const;
  /// Rotation support size; defined when depth() >= 1.
  int rotation_order() const;

  /// Active set S_level (level in [0, depth()]), sorted.
  std::vector<int> active_set(int level) const;
  /// S_L, sorted.
  std::vector<int> final_core() const { return active_set(depth()); }

 private:
  int n_;
  std::vector<SelectionLevel> levels_;
};

struct MmfFactorization {
  NestedSelection selection;
  std::vector<KPointRotation> rotations;
  CoreDiagonalMatrix h;

  /// Throws std::invalid_argument when internal consistency fails:
  /// support mismatches, non-orthogonal cores, h core set != S_L.
  void validate() const;
};

/// U A U^T, touching only the supported rows/columns. The rotation core must
/// be orthogonal within 1e-10.
SymmetricMatrix apply_rotation(const SymmetricMatrix& a, const KPointRotation& u);

/// Sum of squared entries b[i][j] with i != j and (i, j) outside s_l x s_l.
double residual_norm_sq(const SymmetricMatrix& b, const std::vector<int>& s_l);

/// Keeps the diagonal and the s_l x s_l block of b, zeroes everything else.
CoreDiagonalMatrix core_diagonal_project(const SymmetricMatrix& b,
                                         const std::vector<int>& s_l);

/// U_1^T ... U_L^T H U_L ... U_1.
SymmetricMatrix assemble(const MmfFactorization& f);

/// Frobenius distance between a and assemble(f).
double factorization_error(const SymmetricMatrix& a, const MmfFactorization& f);

/// Closest orthogonal matrix (polar factor via SVD).
Matrix polar_orthonormalize(const Matrix& m);

/// 2 x 2 rotation [[cos t, sin t], [-sin t, cos t]]. With the Jacobi angle
/// t = atan2(2q, p - r) / 2 it diagonalizes [[p, q], [q, r]].
Matrix givens_rotation(double theta);

std::vector<KPointRotation> identity_rotations(const NestedSelection& sel);

namespace detail {

/// Validates that idx holds distinct values inside [0, n); returns sorted copy.
std::vector<int> checked_index_set(const std::vector<int>& idx, int n,
                                   const char* what);

/// b <- U b U^T in place, touching only supported rows/columns.
void rotate_sym_inplace(Matrix& b, const std::vector<int>& support,
                        const Matrix& core);
/// b <- U^T b U in place.
void rotate_sym_inverse_inplace(Matrix& b, const std::vector<int>& support,
                                const Matrix& core);

std::vector<char> core_membership(int n, const std::vector<int>& s_l);
double masked_residual(const Matrix& b, const std::vector<char>& in_core);

}  // namespace detail

}  // namespace mmf
