#include "mmf/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace mmf {

Method parse_method(const std::string& name) {
  if (name == "ea" || name == "learned-ea") return Method::ea;
  if (name == "de" || name == "learned-de") return Method::de;
  if (name == "heuristic") return Method::heuristic;
  if (name == "random") return Method::random_pick;
  if (name == "greedy-jacobi") return Method::greedy_jacobi;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::ea: return "ea";
    case Method::de: return "de";
    case Method::heuristic: return "heuristic";
    case Method::random_pick: return "random";
    case Method::greedy_jacobi: return "greedy-jacobi";
  }
  throw std::logic_error("unknown method");
}

PipelineResult run_pipeline(const SymmetricMatrix& a, const PipelineOptions& opt) {
  if (opt.method == Method::greedy_jacobi) {
    MmfFactorization f = greedy_jacobi_mmf(a, opt.L);
    const double initial =
        std::sqrt(residual_norm_sq(a, f.selection.final_core()));
    const double final_error = factorization_error(a, f);
    return PipelineResult{std::move(f), initial, final_error, std::nullopt,
                          std::nullopt};
  }

  Candidate winner;
  std::optional<ConvergenceLog> convergence;
  switch (opt.method) {
    case Method::ea: {
      EvoParams params{opt.population, opt.generations, opt.mutation_rate,
                       opt.seed, opt.L, opt.k, opt.c, a.size()};
      EvolveResult evo = evolve_ea(a, params, opt.jobs);
      winner = std::move(evo.best);
      convergence = std::move(evo.log);
      break;
    }
    case Method::de: {
      EvoParams params{opt.population, opt.generations, opt.mutation_rate,
                       opt.seed, opt.L, opt.k, opt.c, a.size()};
      EvolveResult evo = evolve_de(a, params, opt.jobs);
      winner = std::move(evo.best);
      convergence = std::move(evo.log);
      break;
    }
    case Method::heuristic:
      winner = heuristic_candidate(a, opt.L, opt.c);
      break;
    case Method::random_pick:
      winner = random_candidate(a.size(), opt.L, opt.c, opt.seed);
      break;
    default:
      throw std::logic_error("unhandled method");
  }

  const NestedSelection sel = build_selection(winner, a, opt.L, opt.k, opt.c);
  auto [factorization, report] = stiefel::optimize(a, sel, {}, opt.stiefel);
  const double initial = std::sqrt(report.initial_objective);
  const double final_error = factorization_error(a, factorization);
  return PipelineResult{std::move(factorization), initial, final_error,
                        std::move(convergence), std::move(report)};
}

}  // namespace mmf
