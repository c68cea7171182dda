#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mmf/core.hpp"

namespace mmf::stiefel {

/// Thrown when a Cayley step cannot be taken (singular shift); the caller
/// halves the step size.
struct step_rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StiefelConfig {
  double rho1 = 1e-4;        // sufficient-decrease parameter
  double rho2 = 0.9;         // curvature parameter, rho1 < rho2 < 1
  double epsilon = 1e-6;     // gradient-norm stopping threshold
  int max_outer_iters = 500;
  double tau_init = 1.0;     // step size at the start of every search
  int max_halvings = 40;

  double objective_tol = 0.0;     // stop early once the objective dips below
  // When the gradient vanishes while the objective is still above this, a
  // deterministic feasible probe tries to leave the stationary point (an
  // identity start sits exactly on one whenever the supported diagonal
  // entries are equal). Set to 0 to disable.
  double stationary_escape_tol = 1e-16;
  bool record_diagnostics = false;
};

struct DescentReport {
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::vector<double> objective_trace;  // non-increasing, one entry per iterate
  int iterations = 0;
  bool converged = false;
  bool stalled = false;

  // Filled when StiefelConfig::record_diagnostics is set, one entry per
  // accepted outer iteration.
  std::vector<double> gradient_norms;
  std::vector<double> directional_derivative_analytic;  // -1/2 sum ||W_l||_F^2
  std::vector<double> directional_derivative_measured;  // finite differences
  std::vector<double> max_core_orthogonality_error;
  std::vector<double> accepted_tau;
};

/// F(O_1, ..., O_L): squared residual norm of the fully rotated matrix with
/// respect to the final core S_L. Rotations must conform to the selection;
/// cores need not be orthogonal (the objective is defined for any cores,
/// which is what the finite-difference oracles rely on).
double objective(const SymmetricMatrix& a, const NestedSelection& sel,
                 const std::vector<KPointRotation>& rotations);

/// Euclidean gradient dF/dO_l for every level, via the reverse-mode chain
/// rule through the conjugation ladder.
std::vector<Matrix> gradient(const SymmetricMatrix& a, const NestedSelection& sel,
                             const std::vector<KPointRotation>& rotations);

/// Feasible curve Y(tau) = (I + tau/2 W)^{-1} (I - tau/2 W) X for skew W.
Matrix cayley_curve(const Matrix& x, const Matrix& w, double tau);

/// Curve velocity Y'(tau) = -(I + tau/2 W)^{-1} W (X + Y(tau)) / 2.
Matrix cayley_curve_derivative(const Matrix& x, const Matrix& y,
                               const Matrix& w, double tau);

/// W = G X^T - X G^T; skew-symmetric by construction.
Matrix descent_direction(const Matrix& x, const Matrix& g);

struct LineSearchResult {
  double tau = 0.0;
  bool armijo = false;
  bool wolfe = false;
  bool stalled = false;
  int evaluations = 0;
};

/// Armijo-Wolfe backtracking over the curve: halve tau from tau_init until
/// both conditions hold. When the curvature condition cannot be met within
/// the budget, the largest Armijo-satisfying tau is accepted; when not even
/// the Armijo condition holds, the smallest tried tau is returned flagged as
/// stalled. f0 and fprime0 are F(Y(0)) and F'(Y(0)); fprime0 must be
/// strictly negative.
LineSearchResult curvilinear_search(
    const std::function<double(double)>& objective_at,
    const std::function<double(double)>& derivative_at, double f0,
    double fprime0, const StiefelConfig& cfg);

/// Simultaneous gradient descent over all rotation cores with per-level
/// Cayley curves. Returns the factorization assembled from the best iterate
/// (H is the core-diagonal projection of the final rotated matrix).
std::pair<MmfFactorization, DescentReport> optimize(
    const SymmetricMatrix& a, const NestedSelection& sel,
    std::vector<KPointRotation> init_rotations, const StiefelConfig& cfg);

}  // namespace mmf::stiefel
