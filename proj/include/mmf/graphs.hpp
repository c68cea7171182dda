#pragma once

#include <utility>
#include <vector>

#include "mmf/core.hpp"

namespace mmf {

/// Simple undirected graph; edges canonicalized to u < v, sorted, deduplicated.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  Graph(int n, std::vector<std::pair<int, int>> edges);

  std::vector<int> degrees() const;
  Matrix adjacency() const;
};

/// I - D^{-1/2} A D^{-1/2}. Errors on isolated vertices, naming the vertex.
SymmetricMatrix normalized_laplacian(const Graph& g);

/// Zachary's karate club network (34 vertices, 78 edges), embedded.
Graph karate_graph();

/// order-fold Kronecker power of a symmetric 2 x 2 seed; dimension 2^order.
SymmetricMatrix kronecker_power(const Matrix& seed, int order);

/// Rooted Bethe-lattice tree: the root has z children, every other internal
/// vertex z - 1, with `depth` levels below the root.
Graph cayley_tree(int z, int depth);

}  // namespace mmf
