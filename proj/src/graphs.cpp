#include "mmf/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mmf {

Graph::Graph(int n_in, std::vector<std::pair<int, int>> edges_in)
    : n(n_in), edges(std::move(edges_in)) {
  if (n < 1) throw std::invalid_argument("Graph: n must be >= 1");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("Graph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("Graph: self-loops are not allowed");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(n, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

Matrix Graph::adjacency() const {
  Matrix a = Matrix::Zero(n, n);
  for (const auto& [u, v] : edges) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

SymmetricMatrix normalized_laplacian(const Graph& g) {
  const std::vector<int> deg = g.degrees();
  for (int i = 0; i < g.n; ++i)
    if (deg[i] == 0) {
      std::ostringstream os;
      os << "normalized_laplacian: vertex " << i << " is isolated";
      throw std::invalid_argument(os.str());
    }
  std::vector<double> inv_sqrt(g.n);
  for (int i = 0; i < g.n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(double(deg[i]));
  Matrix lap = Matrix::Identity(g.n, g.n);
  for (const auto& [u, v] : g.edges) {
    const double w = -inv_sqrt[u] * inv_sqrt[v];
    lap(u, v) = w;
    lap(v, u) = w;
  }
  return SymmetricMatrix(std::move(lap));
}

Graph karate_graph() {
  // Zachary's karate club, canonical 78-edge list, 0-based.
  static const std::vector<std::pair<int, int>> kEdges = {
      {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},
      {0, 8},   {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},
      {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},
      {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},
      {2, 13},  {2, 27},  {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},
      {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},  {6, 16},  {8, 30},
      {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32},
      {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
      {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25},
      {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
      {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33},
      {32, 33}};
  return Graph(34, kEdges);
}

SymmetricMatrix kronecker_power(const Matrix& seed, int order) {
  if (seed.rows() != 2 || seed.cols() != 2)
    throw std::invalid_argument("kronecker_power: seed must be 2 x 2");
  if (std::abs(seed(0, 1) - seed(1, 0)) > 1e-12)
    throw std::invalid_argument("kronecker_power: seed must be symmetric");
  if (order < 1) throw std::invalid_argument("kronecker_power: order must be >= 1");
  Matrix result = seed;
  for (int p = 1; p < order; ++p) {
    const int m = static_cast<int>(result.rows());
    Matrix next(2 * m, 2 * m);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        next.block(i * m, j * m, m, m) = seed(i, j) * result;
    result = std::move(next);
  }
  return SymmetricMatrix(std::move(result));
}

Graph cayley_tree(int z, int depth) {
  if (z < 2) throw std::invalid_argument("cayley_tree: z must be >= 2");
  if (depth < 0) throw std::invalid_argument("cayley_tree: depth must be >= 0");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> frontier = {0};
  int next_id = 1;
  for (int level = 0; level < depth; ++level) {
    std::vector<int> next_frontier;
    const int children = (level == 0) ? z : z - 1;
    for (int parent : frontier) {
      for (int c = 0; c < children; ++c) {
        edges.emplace_back(parent, next_id);
        next_frontier.push_back(next_id);
        ++next_id;
      }
    }
    frontier = std::move(next_frontier);
  }
  return Graph(next_id, std::move(edges));
}

}  // namespace mmf
