#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mmf/core.hpp"
#include "mmf/evolution.hpp"
#include "mmf/selection.hpp"
#include "mmf/stiefel.hpp"

namespace mmf {

enum class Method { ea, de, heuristic, random_pick, greedy_jacobi };

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct PipelineOptions {
  Method method = Method::de;
  int L = 0;
  int k = 2;
  int c = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  int population = 40;
  int generations = 100;
  double mutation_rate = 0.3;
  stiefel::StiefelConfig stiefel;
};

struct PipelineResult {
  MmfFactorization factorization;
  double initial_error = 0.0;  // Frobenius error before core optimization
  double final_error = 0.0;    // Frobenius error of the returned factorization
  std::optional<ConvergenceLog> convergence;  // ea / de only
  std::optional<stiefel::DescentReport> descent;
};

/// Index selection by the chosen method followed by Stiefel optimization of
/// the rotation cores; greedy-jacobi is self-contained.
PipelineResult run_pipeline(const SymmetricMatrix& a, const PipelineOptions& opt);

}  // namespace mmf
