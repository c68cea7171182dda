#pragma once

#include <string>

#include "mmf/core.hpp"
#include "mmf/graphs.hpp"
#include "mmf/wavelets.hpp"
#include "mmf/wnn.hpp"

namespace mmf::io {

/// MatrixMarket coordinate real symmetric, 1-based, lower-triangle entries,
/// values printed with 17 significant digits.
SymmetricMatrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const SymmetricMatrix& a);

/// Whitespace-separated `u v` pairs, 0-based, `#` comments; an optional
/// `# n=<N>` directive pins the vertex count.
Graph read_edge_list(const std::string& path);

/// Factorization JSON: n, L, k, c, per-level wavelet indices / rotation
/// support / row-major core, plus the core-diagonal H.
MmfFactorization read_factorization(const std::string& path);
void write_factorization(const std::string& path, const MmfFactorization& f);

/// Basis as a MatrixMarket dense array file plus a JSON sidecar tagging
/// mother (with level) and father rows.
void write_basis(const std::string& matrix_path, const std::string& tags_path,
                 const WaveletBasis& basis);

/// Network parameters as shape-tagged JSON arrays.
void write_network(const std::string& path, const wnn::WnnNetwork& net, int n);
wnn::WnnNetwork read_network(const std::string& path);

/// Shortest-round-trip style formatting used by every writer (17 significant
/// digits for doubles).
std::string format_double(double v);

}  // namespace mmf::io
