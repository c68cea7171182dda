#include "mmf/nystrom.hpp"

#include <algorithm>
#include <cmath>

#include "mmf/rng.hpp"

namespace mmf {

NystromResult nystrom(const SymmetricMatrix& a, int d, std::uint64_t seed) {
  const int n = a.size();
  if (d < 1 || d > n)
    throw std::invalid_argument("nystrom: need 1 <= d <= n");
  std::mt19937_64 rng = make_rng(seed);
  std::vector<int> idx = sample_without_replacement(n, d, rng);
  std::sort(idx.begin(), idx.end());

  Matrix c(n, d);
  Matrix w(d, d);
  for (int j = 0; j < d; ++j) c.col(j) = a.data().col(idx[j]);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) w(i, j) = a(idx[i], idx[j]);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(w);
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = 1e-10 * lambda.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(d);
  for (int i = 0; i < d; ++i)
    if (std::abs(lambda(i)) > cutoff) inv(i) = 1.0 / lambda(i);
  const Matrix pinv =
      eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();

  const double error = (a.data() - c * pinv * c.transpose()).norm();
  return NystromResult{std::move(idx), error};
}

}  // namespace mmf
