#include "mmf/selection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mmf/rng.hpp"

namespace mmf {

namespace {

std::vector<int> nearest_rows_impl(const Matrix& m,
                                   const std::vector<int>& active, int wavelet,
                                   int count) {
  std::vector<std::pair<double, int>> scored;
  scored.reserve(active.size());
  for (int j : active) {
    if (j == wavelet) continue;
    double d2 = 0.0;
    for (int col : active) {
      const double diff = m(wavelet, col) - m(j, col);
      d2 += diff * diff;
    }
    scored.emplace_back(d2, j);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<int> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace

void validate_candidate(const Candidate& cand, int n, int L, int c) {
  if (L < 0 || c < 1) throw std::invalid_argument("candidate: L >= 0, c >= 1");
  if (static_cast<long>(L) * c > n - 1)
    throw std::invalid_argument("candidate: L*c must be <= n - 1");
  if (static_cast<int>(cand.order.size()) != L * c)
    throw std::invalid_argument("candidate: length must be L*c");
  std::vector<char> seen(n, 0);
  for (int idx : cand.order) {
    if (idx < 0 || idx >= n)
      throw std::invalid_argument("candidate: index out of range");
    if (seen[idx]) throw std::invalid_argument("candidate: duplicate index");
    seen[idx] = 1;
  }
}

std::vector<int> nearest_rows(const SymmetricMatrix& a,
                              const std::vector<int>& active, int wavelet,
                              int count) {
  const std::vector<int> sorted =
      detail::checked_index_set(active, a.size(), "nearest_rows active");
  if (!std::binary_search(sorted.begin(), sorted.end(), wavelet))
    throw std::invalid_argument("nearest_rows: wavelet must be in the active set");
  if (count < 0 || count > static_cast<int>(sorted.size()) - 1)
    throw std::invalid_argument("nearest_rows: count too large");
  return nearest_rows_impl(a.data(), sorted, wavelet, count);
}

NestedSelection build_selection(const Candidate& cand, const SymmetricMatrix& a,
                                int L, int k, int c,
                                const RotationProvider& provider) {
  const int n = a.size();
  validate_candidate(cand, n, L, c);
  if (k < c + 1)
    throw std::invalid_argument("build_selection: k must be >= c + 1");

  Matrix context;  // materialized only when a provider rotates it
  const bool rotated = static_cast<bool>(provider);
  if (rotated) context = a.data();
  const Matrix& ctx = rotated ? context : a.data();

  std::vector<char> active(n, 1);
  int active_count = n;
  std::vector<SelectionLevel> levels;
  levels.reserve(L);
  for (int l = 0; l < L; ++l) {
    SelectionLevel level;
    level.wavelet_indices.assign(cand.order.begin() + l * c,
                                 cand.order.begin() + (l + 1) * c);
    for (int w : level.wavelet_indices)
      if (!active[w]) {
        std::ostringstream os;
        os << "build_selection: wavelet index " << w
           << " already removed before level " << l;
        throw std::invalid_argument(os.str());
      }
    // pool: active set minus this level's wavelets, plus the reference row
    const int ref = level.wavelet_indices.front();
    std::vector<int> pool;
    pool.reserve(active_count);
    for (int i = 0; i < n; ++i)
      if (active[i]) pool.push_back(i);
    std::vector<int> measured = pool;
    for (int w : level.wavelet_indices)
      if (w != ref)
        measured.erase(std::find(measured.begin(), measured.end(), w));
    if (k - c > static_cast<int>(measured.size()) - 1) {
      std::ostringstream os;
      os << "build_selection: support of size " << k
         << " infeasible at level " << l << " (active set has "
         << active_count << " indices)";
      throw std::invalid_argument(os.str());
    }
    std::vector<int> support =
        nearest_rows_impl(ctx, measured, ref, k - c);
    support.insert(support.end(), level.wavelet_indices.begin(),
                   level.wavelet_indices.end());
    std::sort(support.begin(), support.end());
    level.rotation_support = support;

    if (rotated) {
      Matrix core = provider(l, support, context);
      if (core.rows() != k || core.cols() != k)
        throw std::invalid_argument("build_selection: provider core must be k x k");
      detail::rotate_sym_inplace(context, support, core);
    }

    for (int w : level.wavelet_indices) {
      active[w] = 0;
      --active_count;
    }
    levels.push_back(std::move(level));
  }
  return NestedSelection(n, std::move(levels));
}

Candidate heuristic_candidate(const SymmetricMatrix& a, int L, int c) {
  const int n = a.size();
  if (static_cast<long>(L) * c > n - 1)
    throw std::invalid_argument("heuristic_candidate: L*c must be <= n - 1");
  std::vector<char> active(n, 1);
  Candidate cand;
  cand.order.reserve(L * c);
  for (int pick = 0; pick < L * c; ++pick) {
    double best = -1.0;
    int best_idx = -1;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      double energy = 0.0;
      for (int j = 0; j < n; ++j)
        if (active[j] && j != i) energy += a(i, j) * a(i, j);
      if (best_idx == -1 || energy < best) {
        best = energy;
        best_idx = i;
      }
    }
    cand.order.push_back(best_idx);
    active[best_idx] = 0;
  }
  return cand;
}

MmfFactorization greedy_jacobi_mmf(const SymmetricMatrix& a, int L) {
  const int n = a.size();
  if (L < 0 || L > n - 1)
    throw std::invalid_argument("greedy_jacobi_mmf: need 0 <= L <= n - 1");
  Matrix b = a.data();
  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;

  std::vector<SelectionLevel> levels;
  std::vector<KPointRotation> rotations;
  for (int l = 0; l < L; ++l) {
    double best_energy = 0.0;
    int best_i = -1, best_j = -1, best_w = -1;
    double best_theta = 0.0;
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const int i = active[x], j = active[y];
        const double p = b(i, i), q = b(i, j), r = b(j, j);
        const double theta = (q == 0.0) ? 0.0 : 0.5 * std::atan2(2.0 * q, p - r);
        const double ct = std::cos(theta), st = std::sin(theta);
        // rotated rows restricted to the active columns, pair entries excluded
        double energy_i = 0.0, energy_j = 0.0;
        for (int col : active) {
          if (col == i || col == j) continue;
          const double ri = ct * b(i, col) + st * b(j, col);
          const double rj = -st * b(i, col) + ct * b(j, col);
          energy_i += ri * ri;
          energy_j += rj * rj;
        }
        const int w = (energy_i <= energy_j) ? i : j;
        const double energy = std::min(energy_i, energy_j);
        if (best_i == -1 || energy < best_energy) {
          best_energy = energy;
          best_i = i;
          best_j = j;
          best_w = w;
          best_theta = theta;
        }
      }
    }
    const std::vector<int> support = {best_i, best_j};
    const Matrix core = givens_rotation(best_theta);
    detail::rotate_sym_inplace(b, support, core);
    SelectionLevel level;
    level.wavelet_indices = {best_w};
    level.rotation_support = support;
    levels.push_back(std::move(level));
    rotations.emplace_back(n, support, core);
    active.erase(std::find(active.begin(), active.end(), best_w));
  }

  NestedSelection selection(n, std::move(levels));
  CoreDiagonalMatrix h =
      core_diagonal_project(SymmetricMatrix(b), selection.final_core());
  return MmfFactorization{std::move(selection), std::move(rotations),
                          std::move(h)};
}

Candidate random_candidate(int n, int L, int c, std::uint64_t seed) {
  if (static_cast<long>(L) * c > n - 1)
    throw std::invalid_argument("random_candidate: L*c must be <= n - 1");
  std::mt19937_64 rng = make_rng(seed);
  Candidate cand;
  cand.order = sample_without_replacement(n, L * c, rng);
  return cand;
}

}  // namespace mmf
