#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bilevel/evo/engine.hpp"
#include "bilevel/nested/problem.hpp"

namespace bilevel::nested {

using evo::EAParams;
using evo::Rng;
using evo::Termination;

/// Upper genome together with the lower-level optimum found for it.
struct Individual {
  Genome upper;
  Genome lower;
  double upper_obj = 0.0;
  double upper_cv = 0.0;
  double lower_obj = 0.0;
  double lower_cv = 0.0;

  /// Violation used to rank upper members: an infeasible lower optimum
  /// demotes the upper point.
  double effective_cv() const { return upper_cv + lower_cv; }
};

struct LowerResult {
  Genome genome;
  double objective = 0.0;
  double cv = 0.0;
  std::size_t evaluations = 0;
  std::size_t generations = 0;
  Termination terminated_by = Termination::generation_cap;
};

struct EtaPoint {
  std::size_t generation;
  double eta;
};

struct ElitePoint {
  std::size_t generation;
  double upper_obj;
  double lower_obj;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::size_t ul_fe = 0;
  std::size_t ll_fe = 0;
  std::size_t ll_calls = 0;
  // Lower-level solves issued by the post-termination upper local search.
  std::size_t local_search_calls = 0;
  std::size_t generations = 0;
  std::vector<EtaPoint> eta_trace;
  std::vector<ElitePoint> elite_trace;
  Individual best;
  Termination terminated_by = Termination::generation_cap;
};

struct SolverOptions {
  std::size_t lower_local_search_budget = 50;
  std::size_t upper_local_search_budget = 100;
};

/// Index of the member whose upper genome is closest to `upper` after scaling
/// each gene by its bound width; ties go to the lowest index.
std::size_t nearest_index(std::span<const Individual> pop, const Genome& upper,
                          const GenomeShape& shape);

const Individual& nearest_member(std::span<const Individual> pop, const Genome& upper,
                                 const GenomeShape& shape);

/// Optimizes the lower level for a fixed upper genome: n_p - 1 random members
/// plus `warm` (or n_p random members when absent), the steady-state loop, then
/// lower-level local search.
LowerResult lower_solve(const BilevelProblem& problem, const Genome& upper,
                        const std::optional<Genome>& warm, const EAParams& ll_params, Rng& rng,
                        const SolverOptions& options = {});

/// Nested evolutionary solve of the whole problem. Senses in the parameter
/// sets are overridden by the problem's senses.
RunRecord solve(const BilevelProblem& problem, EAParams ul_params, EAParams ll_params,
                std::uint64_t seed, const SolverOptions& options = {});

/// Evaluates both levels at (upper, lower) and packs the result.
Individual evaluate_pair(const BilevelProblem& problem, const Genome& upper, const Genome& lower);

}  // namespace bilevel::nested
