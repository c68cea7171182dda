#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mmf/core.hpp"
#include "mmf/selection.hpp"

namespace mmf {

struct EvoParams {
  int population = 40;        // p_max, must be even
  int iterations = 100;       // i_max
  double mutation_rate = 0.3; // m, EA only
  std::uint64_t seed = 0;
  int L = 0, k = 0, c = 1, n = 0;
};

struct GenerationRecord {
  int generation;
  double best_fitness;      // global best so far, non-increasing
  double mean_fitness;      // over the generation's population
  double elapsed_seconds;   // wall clock since the evolve call started
};

struct ConvergenceLog {
  std::vector<GenerationRecord> records;
  void write_csv(const std::string& path) const;
};

/// Identity-rotation cost of a candidate: builds the nearest-row selection
/// and returns the masked residual of A itself. Invalid candidates score
/// +infinity (logged) rather than aborting the evolution loop.
double fitness(const SymmetricMatrix& a, const Candidate& cand, int k, int c);

/// One-point crossover that first sets aside the values common to both
/// parents, crosses the unique remainders at `cut`, then re-appends the
/// common values in each parent's own order.
std::pair<Candidate, Candidate> crossover_at(const Candidate& s1,
                                             const Candidate& s2, int cut);
std::pair<Candidate, Candidate> crossover(const Candidate& s1,
                                          const Candidate& s2,
                                          std::uint64_t seed);
std::pair<Candidate, Candidate> crossover_rng(const Candidate& s1,
                                              const Candidate& s2,
                                              std::mt19937_64& rng);

/// Two independent operators, each applied with probability `rate`: swap two
/// positions, and replace one value with a fresh one from [0, n). Output
/// values stay distinct.
Candidate mutate(const Candidate& cand, double rate, int n, std::uint64_t seed);
Candidate mutate_rng(const Candidate& cand, double rate, int n,
                     std::mt19937_64& rng);

struct EvolveResult {
  Candidate best;
  double best_fitness;
  ConvergenceLog log;
};

/// Evolutionary algorithm: generational replacement with fitness-ranked
/// parent selection, crossover and probabilistic mutation; the global best
/// candidate is tracked across generations.
EvolveResult evolve_ea(const SymmetricMatrix& a, const EvoParams& params,
                       int jobs = 1);

/// Directed evolution: the top half survives, every parent spawns one
/// offspring by a forced swap plus a forced replacement.
EvolveResult evolve_de(const SymmetricMatrix& a, const EvoParams& params,
                       int jobs = 1);

}  // namespace mmf
