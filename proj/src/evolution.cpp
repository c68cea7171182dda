#include "mmf/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "mmf/log.hpp"
#include "mmf/rng.hpp"

namespace mmf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent stream tags so parallel and serial evolution agree bit for bit.
enum Stream : std::uint64_t {
  kSigmaStar = 0,
  kInitPopulation = 1,
  kCrossover = 2,
  kMutation = 3,
  kDirected = 4,
};

void validate_params(const EvoParams& p) {
  if (p.population < 2 || p.population % 2 != 0)
    throw std::invalid_argument("EvoParams: population must be even and >= 2");
  if (p.iterations < 0)
    throw std::invalid_argument("EvoParams: iterations must be >= 0");
  if (p.mutation_rate < 0.0 || p.mutation_rate > 1.0)
    throw std::invalid_argument("EvoParams: mutation_rate must be in [0, 1]");
  if (p.n < 2 || static_cast<long>(p.L) * p.c > p.n - 1)
    throw std::invalid_argument("EvoParams: L*c must be <= n - 1");
  if (p.k < p.c + 1 || p.k > p.n)
    throw std::invalid_argument("EvoParams: need c + 1 <= k <= n");
}

Candidate random_candidate_rng(int n, int length, std::mt19937_64& rng) {
  Candidate cand;
  cand.order = sample_without_replacement(n, length, rng);
  return cand;
}

void swap_two(Candidate& cand, std::mt19937_64& rng) {
  const int len = static_cast<int>(cand.order.size());
  if (len < 2) return;
  std::uniform_int_distribution<int> dist(0, len - 1);
  const int i = dist(rng);
  int j = std::uniform_int_distribution<int>(0, len - 2)(rng);
  if (j >= i) ++j;
  std::swap(cand.order[i], cand.order[j]);
}

void replace_one(Candidate& cand, int n, std::mt19937_64& rng) {
  const int len = static_cast<int>(cand.order.size());
  if (n <= len) return;  // no value outside the candidate exists
  std::vector<char> used(n, 0);
  for (int v : cand.order) used[v] = 1;
  std::vector<int> complement;
  complement.reserve(n - len);
  for (int v = 0; v < n; ++v)
    if (!used[v]) complement.push_back(v);
  const int pos = std::uniform_int_distribution<int>(0, len - 1)(rng);
  const int pick = std::uniform_int_distribution<int>(
      0, static_cast<int>(complement.size()) - 1)(rng);
  cand.order[pos] = complement[pick];
}

std::vector<double> evaluate_population(const SymmetricMatrix& a,
                                        const std::vector<Candidate>& pop,
                                        int k, int c, int jobs) {
  std::vector<double> fit(pop.size(), kInf);
  auto eval_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fit[i] = fitness(a, pop[i], k, c);
  };
  if (jobs <= 1 || pop.size() < 2) {
    eval_range(0, pop.size());
    return fit;
  }
  const int workers = std::min<int>(jobs, static_cast<int>(pop.size()));
  std::vector<std::thread> threads;
  const std::size_t chunk = (pop.size() + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(pop.size(), begin + chunk);
    if (begin >= end) break;
    threads.emplace_back(eval_range, begin, end);
  }
  for (std::thread& t : threads) t.join();
  return fit;
}

// Indices of the fittest half, stable in (fitness, index) order.
std::vector<std::size_t> top_half(const std::vector<double>& fit) {
  std::vector<std::size_t> idx(fit.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return fit[a] < fit[b];
  });
  idx.resize(fit.size() / 2);
  return idx;
}

struct Common {
  std::vector<int> unique1, unique2;  // order-preserving remainders
  std::vector<int> common1, common2;  // common values in each parent's order
};

Common split_common(const Candidate& s1, const Candidate& s2) {
  Common out;
  auto contains = [](const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  for (int v : s1.order)
    (contains(s2.order, v) ? out.common1 : out.unique1).push_back(v);
  for (int v : s2.order)
    (contains(s1.order, v) ? out.common2 : out.unique2).push_back(v);
  return out;
}

std::pair<Candidate, Candidate> crossover_impl(const Candidate& s1,
                                               const Candidate& s2, int cut) {
  const Common parts = split_common(s1, s2);
  const int len = static_cast<int>(parts.unique1.size());
  Candidate o1, o2;
  if (len < 2) {
    // nothing to cut: remainders are swapped whole
    o1.order = parts.unique2;
    o2.order = parts.unique1;
  } else {
    o1.order.assign(parts.unique1.begin(), parts.unique1.begin() + cut);
    o1.order.insert(o1.order.end(), parts.unique2.begin() + cut,
                    parts.unique2.end());
    o2.order.assign(parts.unique2.begin(), parts.unique2.begin() + cut);
    o2.order.insert(o2.order.end(), parts.unique1.begin() + cut,
                    parts.unique1.end());
  }
  o1.order.insert(o1.order.end(), parts.common1.begin(), parts.common1.end());
  o2.order.insert(o2.order.end(), parts.common2.begin(), parts.common2.end());
  return {std::move(o1), std::move(o2)};
}

}  // namespace

void ConvergenceLog::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "generation,best_fitness,mean_fitness,elapsed_seconds\n";
  char buf[128];
  for (const GenerationRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.6f\n", r.generation,
                  r.best_fitness, r.mean_fitness, r.elapsed_seconds);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

double fitness(const SymmetricMatrix& a, const Candidate& cand, int k, int c) {
  try {
    const int L = static_cast<int>(cand.order.size()) / std::max(c, 1);
    const NestedSelection sel = build_selection(cand, a, L, k, c);
    return residual_norm_sq(a, sel.final_core());
  } catch (const std::invalid_argument& e) {
    log::warn(std::string("fitness: invalid candidate scored +inf (") +
              e.what() + ")");
    return kInf;
  }
}

std::pair<Candidate, Candidate> crossover_at(const Candidate& s1,
                                             const Candidate& s2, int cut) {
  if (s1.order.size() != s2.order.size())
    throw std::invalid_argument("crossover: parents must have equal length");
  const Common parts = split_common(s1, s2);
  const int len = static_cast<int>(parts.unique1.size());
  if (len >= 2 && (cut < 1 || cut > len - 1))
    throw std::invalid_argument("crossover_at: cut must be in [1, len - 1]");
  return crossover_impl(s1, s2, cut);
}

std::pair<Candidate, Candidate> crossover_rng(const Candidate& s1,
                                              const Candidate& s2,
                                              std::mt19937_64& rng) {
  if (s1.order.size() != s2.order.size())
    throw std::invalid_argument("crossover: parents must have equal length");
  const Common parts = split_common(s1, s2);
  const int len = static_cast<int>(parts.unique1.size());
  int cut = 0;
  if (len >= 2) cut = std::uniform_int_distribution<int>(1, len - 1)(rng);
  return crossover_impl(s1, s2, cut);
}

std::pair<Candidate, Candidate> crossover(const Candidate& s1,
                                          const Candidate& s2,
                                          std::uint64_t seed) {
  std::mt19937_64 rng = make_rng(seed);
  return crossover_rng(s1, s2, rng);
}

Candidate mutate_rng(const Candidate& cand, double rate, int n,
                     std::mt19937_64& rng) {
  Candidate out = cand;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < rate) swap_two(out, rng);
  if (coin(rng) < rate) replace_one(out, n, rng);
  return out;
}

Candidate mutate(const Candidate& cand, double rate, int n,
                 std::uint64_t seed) {
  std::mt19937_64 rng = make_rng(seed);
  return mutate_rng(cand, rate, n, rng);
}

EvolveResult evolve_ea(const SymmetricMatrix& a, const EvoParams& params,
                       int jobs) {
  validate_params(params);
  const auto start = std::chrono::steady_clock::now();
  const int length = params.L * params.c;
  const int p_max = params.population;

  std::vector<Candidate> population(p_max);
  for (int i = 0; i < p_max; ++i) {
    std::mt19937_64 rng = make_rng(params.seed, kInitPopulation, i);
    population[i] = random_candidate_rng(params.n, length, rng);
  }
  std::mt19937_64 star_rng = make_rng(params.seed, kSigmaStar);
  Candidate best = random_candidate_rng(params.n, length, star_rng);
  double best_fit = fitness(a, best, params.k, params.c);

  ConvergenceLog log;
  std::vector<double> fit =
      evaluate_population(a, population, params.k, params.c, jobs);
  for (int gen = 1; gen <= params.iterations; ++gen) {
    const std::vector<std::size_t> parents = top_half(fit);
    std::vector<Candidate> offspring;
    offspring.reserve(p_max);
    for (int j = 0; j < p_max / 2; ++j) {
      std::mt19937_64 rng = make_rng(params.seed, kCrossover, gen, j);
      std::size_t i1 = 0, i2 = 0;
      if (parents.size() > 1) {
        std::uniform_int_distribution<std::size_t> dist(0, parents.size() - 1);
        i1 = dist(rng);
        i2 = std::uniform_int_distribution<std::size_t>(0, parents.size() - 2)(rng);
        if (i2 >= i1) ++i2;
      }
      auto [c1, c2] = crossover_rng(population[parents[i1]],
                                    population[parents[i2]], rng);
      offspring.push_back(std::move(c1));
      offspring.push_back(std::move(c2));
    }
    for (int t = 0; t < p_max; ++t) {
      std::mt19937_64 rng = make_rng(params.seed, kMutation, gen, t);
      offspring[t] = mutate_rng(offspring[t], params.mutation_rate, params.n, rng);
    }
    population = std::move(offspring);
    fit = evaluate_population(a, population, params.k, params.c, jobs);

    const auto best_it = std::min_element(fit.begin(), fit.end());
    if (*best_it < best_fit) {
      best_fit = *best_it;
      best = population[best_it - fit.begin()];
    }
    const double mean =
        std::accumulate(fit.begin(), fit.end(), 0.0) / fit.size();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    log.records.push_back(GenerationRecord{gen, best_fit, mean, elapsed});
  }
  return EvolveResult{std::move(best), best_fit, std::move(log)};
}

EvolveResult evolve_de(const SymmetricMatrix& a, const EvoParams& params,
                       int jobs) {
  validate_params(params);
  const auto start = std::chrono::steady_clock::now();
  const int length = params.L * params.c;
  const int p_max = params.population;

  std::vector<Candidate> population(p_max);
  for (int i = 0; i < p_max; ++i) {
    std::mt19937_64 rng = make_rng(params.seed, kInitPopulation, i);
    population[i] = random_candidate_rng(params.n, length, rng);
  }
  std::mt19937_64 star_rng = make_rng(params.seed, kSigmaStar);
  Candidate best = random_candidate_rng(params.n, length, star_rng);
  double best_fit = fitness(a, best, params.k, params.c);

  ConvergenceLog log;
  std::vector<double> fit =
      evaluate_population(a, population, params.k, params.c, jobs);
  for (int gen = 1; gen <= params.iterations; ++gen) {
    const std::vector<std::size_t> parent_idx = top_half(fit);
    std::vector<Candidate> parents;
    std::vector<double> parent_fit;
    parents.reserve(parent_idx.size());
    for (std::size_t i : parent_idx) {
      parents.push_back(population[i]);
      parent_fit.push_back(fit[i]);
    }

    std::vector<Candidate> offspring;
    offspring.reserve(parents.size());
    for (std::size_t j = 0; j < parents.size(); ++j) {
      std::mt19937_64 rng = make_rng(params.seed, kDirected, gen, j);
      Candidate child = parents[j];
      swap_two(child, rng);
      replace_one(child, params.n, rng);
      offspring.push_back(std::move(child));
    }
    std::vector<double> offspring_fit =
        evaluate_population(a, offspring, params.k, params.c, jobs);

    population = std::move(parents);
    population.insert(population.end(),
                      std::make_move_iterator(offspring.begin()),
                      std::make_move_iterator(offspring.end()));
    fit = std::move(parent_fit);
    fit.insert(fit.end(), offspring_fit.begin(), offspring_fit.end());

    const auto best_it = std::min_element(fit.begin(), fit.end());
    if (*best_it < best_fit) {
      best_fit = *best_it;
      best = population[best_it - fit.begin()];
    }
    const double mean =
        std::accumulate(fit.begin(), fit.end(), 0.0) / fit.size();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    log.records.push_back(GenerationRecord{gen, best_fit, mean, elapsed});
  }
  return EvolveResult{std::move(best), best_fit, std::move(log)};
}

}  // namespace mmf
