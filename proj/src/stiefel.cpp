#include "mmf/stiefel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace mmf::stiefel {

namespace {

void check_conformance(const SymmetricMatrix& a, const NestedSelection& sel,
                       const std::vector<KPointRotation>& rotations) {
  if (sel.size() != a.size())
    throw std::invalid_argument("stiefel: selection/matrix dimension mismatch");
  if (static_cast<int>(rotations.size()) != sel.depth())
    throw std::invalid_argument("stiefel: rotation count != selection depth");
  for (int l = 0; l < sel.depth(); ++l) {
    if (rotations[l].n != a.size())
      throw std::invalid_argument("stiefel: rotation dimension mismatch");
    if (rotations[l].support != sel.levels()[l].rotation_support)
      throw std::invalid_argument(
          "stiefel: rotation support does not match the selection");
  }
}

// Forward conjugation ladder, returning the fully rotated matrix.
Matrix forward_rotate(const SymmetricMatrix& a,
                      const std::vector<KPointRotation>& rotations) {
  Matrix b = a.data();
  for (const KPointRotation& u : rotations)
    detail::rotate_sym_inplace(b, u.support, u.core);
  return b;
}

double masked_objective(const Matrix& b, const std::vector<char>& in_core) {
  return detail::masked_residual(b, in_core);
}

// dF/dB for B the fully rotated matrix: 2 * (mask o B), where the mask keeps
// i != j with (i, j) outside the core block.
Matrix objective_gradient_wrt_rotated(const Matrix& b,
                                      const std::vector<char>& in_core) {
  const int n = static_cast<int>(b.rows());
  Matrix g = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (in_core[i] && in_core[j]) continue;
      g(i, j) = 2.0 * b(i, j);
    }
  return g;
}

// Backward pass: walks the ladder from level L down to 1, reconstructing the
// intermediate matrices by inverse rotation and restricting the gradient to
// each supported block:
//   dF/dO_l = 2 * (G_l[I, :] * A_l[:, I]) * O_l,
// with G_{l-1} = U_l^T G_l U_l and A_{l-1} = U_l^T A_l U_l.
std::vector<Matrix> backward_gradients(const Matrix& rotated,
                                       const std::vector<char>& in_core,
                                       const std::vector<KPointRotation>& rots) {
  const int depth = static_cast<int>(rots.size());
  Matrix a_l = rotated;
  Matrix g_l = objective_gradient_wrt_rotated(rotated, in_core);
  std::vector<Matrix> grads(depth);
  for (int l = depth - 1; l >= 0; --l) {
    const KPointRotation& u = rots[l];
    const int k = u.order();
    const int n = u.n;
    Matrix g_rows(k, static_cast<int>(a_l.cols()));
    for (int a = 0; a < k; ++a) g_rows.row(a) = g_l.row(u.support[a]);
    Matrix a_cols(n, k);
    for (int a = 0; a < k; ++a) a_cols.col(a) = a_l.col(u.support[a]);
    grads[l] = 2.0 * (g_rows * a_cols) * u.core;
    if (l > 0) {
      detail::rotate_sym_inverse_inplace(a_l, u.support, u.core);
      detail::rotate_sym_inverse_inplace(g_l, u.support, u.core);
    }
  }
  return grads;
}

double skewness(const Matrix& w) {
  return (w + w.transpose()).lpNorm<Eigen::Infinity>();
}

// Canonical skew probe: +-1 on the first off-diagonal. Used to leave exact
// stationary points that are not minima.
Matrix probe_skew(int k) {
  Matrix w = Matrix::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) {
    w(i, i + 1) = 1.0;
    w(i + 1, i) = -1.0;
  }
  return w;
}

}  // namespace

double objective(const SymmetricMatrix& a, const NestedSelection& sel,
                 const std::vector<KPointRotation>& rotations) {
  check_conformance(a, sel, rotations);
  const std::vector<char> in_core =
      detail::core_membership(a.size(), sel.final_core());
  return masked_objective(forward_rotate(a, rotations), in_core);
}

std::vector<Matrix> gradient(const SymmetricMatrix& a, const NestedSelection& sel,
                             const std::vector<KPointRotation>& rotations) {
  check_conformance(a, sel, rotations);
  const std::vector<char> in_core =
      detail::core_membership(a.size(), sel.final_core());
  return backward_gradients(forward_rotate(a, rotations), in_core, rotations);
}

Matrix cayley_curve(const Matrix& x, const Matrix& w, double tau) {
  if (w.rows() != w.cols() || w.rows() != x.rows())
    throw std::invalid_argument("cayley_curve: shape mismatch");
  if (skewness(w) > 1e-12)
    throw std::invalid_argument("cayley_curve: w must be skew-symmetric");
  const int n = static_cast<int>(w.rows());
  const Matrix shift = (0.5 * tau) * w;
  Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) + shift);
  const Matrix y = lu.solve((Matrix::Identity(n, n) - shift) * x);
  if (!y.allFinite())
    throw step_rejected("cayley_curve: singular shift, step rejected");
  return y;
}

Matrix cayley_curve_derivative(const Matrix& x, const Matrix& y,
                               const Matrix& w, double tau) {
  const int n = static_cast<int>(w.rows());
  const Matrix shift = (0.5 * tau) * w;
  Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) + shift);
  const Matrix v = lu.solve(w * (0.5 * (x + y)));
  if (!v.allFinite())
    throw step_rejected("cayley_curve_derivative: singular shift");
  return -v;
}

Matrix descent_direction(const Matrix& x, const Matrix& g) {
  if (x.rows() != g.rows() || x.cols() != g.cols())
    throw std::invalid_argument("descent_direction: shape mismatch");
  const Matrix m = g * x.transpose();
  return m - m.transpose();
}

LineSearchResult curvilinear_search(
    const std::function<double(double)>& objective_at,
    const std::function<double(double)>& derivative_at, double f0,
    double fprime0, const StiefelConfig& cfg) {
  if (!(fprime0 < 0.0))
    throw std::invalid_argument(
        "curvilinear_search: derivative at tau = 0 must be strictly negative");
  LineSearchResult result;
  double tau = cfg.tau_init;
  std::optional<double> armijo_tau;
  double last_tried = tau;
  for (int h = 0; h <= cfg.max_halvings; ++h, tau *= 0.5) {
    last_tried = tau;
    double f_tau;
    try {
      f_tau = objective_at(tau);
      ++result.evaluations;
    } catch (const step_rejected&) {
      continue;
    }
    const bool armijo = f_tau <= f0 + cfg.rho1 * tau * fprime0;
    if (!armijo) continue;
    if (!armijo_tau) armijo_tau = tau;
    double fprime_tau;
    try {
      fprime_tau = derivative_at(tau);
      ++result.evaluations;
    } catch (const step_rejected&) {
      continue;
    }
    // strong form of the curvature bound: implies fprime_tau >= rho2 *
    // fprime0 and rejects overshooting steps that oscillate around the
    // minimizer without contracting
    if (std::abs(fprime_tau) <= -cfg.rho2 * fprime0) {
      result.tau = tau;
      result.armijo = true;
      result.wolfe = true;
      return result;
    }
  }
  if (armijo_tau) {
    result.tau = *armijo_tau;
    result.armijo = true;
    return result;
  }
  result.tau = last_tried;
  result.stalled = true;
  return result;
}

std::pair<MmfFactorization, DescentReport> optimize(
    const SymmetricMatrix& a, const NestedSelection& sel,
    std::vector<KPointRotation> init_rotations, const StiefelConfig& cfg) {
  if (init_rotations.empty() && sel.depth() > 0)
    init_rotations = identity_rotations(sel);
  check_conformance(a, sel, init_rotations);
  if (!(cfg.rho1 > 0 && cfg.rho1 < cfg.rho2 && cfg.rho2 < 1))
    throw std::invalid_argument("optimize: need 0 < rho1 < rho2 < 1");
  if (!(cfg.epsilon > 0) || !(cfg.tau_init > 0))
    throw std::invalid_argument("optimize: epsilon and tau_init must be positive");

  const int depth = sel.depth();
  const std::vector<char> in_core =
      detail::core_membership(a.size(), sel.final_core());

  std::vector<KPointRotation> current = std::move(init_rotations);
  Matrix rotated = forward_rotate(a, current);
  double f_current = masked_objective(rotated, in_core);
  std::vector<Matrix> grads = backward_gradients(rotated, in_core, current);

  DescentReport report;
  report.initial_objective = f_current;
  report.objective_trace.push_back(f_current);

  for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
    if (cfg.objective_tol > 0.0 && f_current <= cfg.objective_tol) {
      report.converged = true;
      break;
    }

    std::vector<Matrix> directions(depth);
    double grad_norm_sq = 0.0;
    for (int l = 0; l < depth; ++l) {
      directions[l] = descent_direction(current[l].core, grads[l]);
      grad_norm_sq += directions[l].squaredNorm();
    }
    const double grad_norm = std::sqrt(grad_norm_sq);
    if (grad_norm <= cfg.epsilon) {
      // Stationary point. Unless the objective says we are done, probe a
      // fixed feasible direction: at a maximum or saddle it strictly
      // decreases F, at a minimum it fails and we stop.
      bool escaped = false;
      if (cfg.stationary_escape_tol > 0.0 &&
          f_current > cfg.stationary_escape_tol) {
        double tau = cfg.tau_init;
        for (int h = 0; h <= cfg.max_halvings && !escaped; ++h, tau *= 0.5) {
          std::vector<KPointRotation> trial = current;
          for (int l = 0; l < depth; ++l)
            trial[l].core = cayley_curve(current[l].core,
                                         probe_skew(trial[l].order()), tau);
          Matrix trial_rotated = forward_rotate(a, trial);
          const double f_trial = masked_objective(trial_rotated, in_core);
          if (f_trial < f_current) {
            current = std::move(trial);
            rotated = std::move(trial_rotated);
            f_current = f_trial;
            grads = backward_gradients(rotated, in_core, current);
            report.objective_trace.push_back(f_current);
            ++report.iterations;
            if (cfg.record_diagnostics) {
              double max_orth = 0.0;
              for (int l = 0; l < depth; ++l)
                max_orth =
                    std::max(max_orth, current[l].orthogonality_error());
              report.gradient_norms.push_back(grad_norm);
              report.directional_derivative_analytic.push_back(0.0);
              report.directional_derivative_measured.push_back(0.0);
              report.max_core_orthogonality_error.push_back(max_orth);
              report.accepted_tau.push_back(tau);
            }
            escaped = true;
          }
        }
      }
      if (escaped) continue;
      report.converged = true;
      break;
    }
    const double fprime0 = -0.5 * grad_norm_sq;

    // Trial evaluation along the product curve; the last evaluated point is
    // cached so the accepted step reuses its forward pass and gradients.
    struct TrialCache {
      double tau = std::numeric_limits<double>::quiet_NaN();
      std::vector<KPointRotation> rotations;
      Matrix rotated;
      double f = 0.0;
      std::vector<Matrix> grads;
      bool has_grads = false;
    } cache;

    auto evaluate = [&](double tau) -> double {
      std::vector<KPointRotation> trial = current;
      for (int l = 0; l < depth; ++l)
        trial[l].core = cayley_curve(current[l].core, directions[l], tau);
      cache.rotated = forward_rotate(a, trial);
      cache.f = masked_objective(cache.rotated, in_core);
      cache.rotations = std::move(trial);
      cache.tau = tau;
      cache.has_grads = false;
      return cache.f;
    };
    auto derivative = [&](double tau) -> double {
      if (!(cache.tau == tau)) evaluate(tau);
      cache.grads = backward_gradients(cache.rotated, in_core, cache.rotations);
      cache.has_grads = true;
      double d = 0.0;
      for (int l = 0; l < depth; ++l) {
        const Matrix velocity = cayley_curve_derivative(
            current[l].core, cache.rotations[l].core, directions[l], tau);
        d += (cache.grads[l].array() * velocity.array()).sum();
      }
      return d;
    };

    double measured_fd = 0.0;
    if (cfg.record_diagnostics) {
      // fourth-order central difference of F along the curve at tau = 0
      const double h = 1e-3;
      const double f1 = evaluate(h), f2 = evaluate(2 * h);
      const double fm1 = evaluate(-h), fm2 = evaluate(-2 * h);
      measured_fd = (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h);
    }

    LineSearchResult ls =
        curvilinear_search(evaluate, derivative, f_current, fprime0, cfg);
    if (ls.stalled) {
      report.stalled = true;
      break;
    }
    if (!(cache.tau == ls.tau)) evaluate(ls.tau);
    if (!(cache.f < f_current)) {
      report.stalled = true;
      break;
    }

    current = cache.rotations;
    rotated = cache.rotated;
    f_current = cache.f;

    // Cayley keeps each core orthogonal to round-off; correct residual drift
    // before it can accumulate across iterations.
    double max_orth = 0.0;
    bool corrected = false;
    for (int l = 0; l < depth; ++l) {
      const double err = current[l].orthogonality_error();
      max_orth = std::max(max_orth, err);
      if (err > 1e-12) {
        current[l].core = polar_orthonormalize(current[l].core);
        corrected = true;
      }
    }
    if (corrected) {
      rotated = forward_rotate(a, current);
      const double f_corrected = masked_objective(rotated, in_core);
      if (!(f_corrected <= f_current)) {
        report.stalled = true;
        // keep the uncorrected iterate's objective in the trace
      }
      f_current = std::min(f_current, f_corrected);
      cache.has_grads = false;
    }
    grads = cache.has_grads ? cache.grads
                            : backward_gradients(rotated, in_core, current);

    report.objective_trace.push_back(f_current);
    ++report.iterations;
    if (cfg.record_diagnostics) {
      report.gradient_norms.push_back(grad_norm);
      report.directional_derivative_analytic.push_back(fprime0);
      report.directional_derivative_measured.push_back(measured_fd);
      report.max_core_orthogonality_error.push_back(max_orth);
      report.accepted_tau.push_back(ls.tau);
    }
    if (report.stalled) break;
  }

  report.final_objective = f_current;
  CoreDiagonalMatrix h =
      core_diagonal_project(SymmetricMatrix(rotated), sel.final_core());
  MmfFactorization factorization{sel, std::move(current), std::move(h)};
  factorization.validate();
  return {std::move(factorization), std::move(report)};
}

}  // namespace mmf::stiefel
