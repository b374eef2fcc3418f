#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "bilevel/errors.hpp"
#include "bilevel/evo/compare.hpp"
#include "bilevel/evo/genome.hpp"
#include "bilevel/evo/operators.hpp"
#include "bilevel/evo/params.hpp"
#include "bilevel/evo/termination.hpp"

namespace bilevel::evo {

/// An evaluated genome. `Extra` carries level-specific data (the nested solver
/// stores the lower-level optimum of an upper member there).
template <class Extra = std::monostate>
struct Member {
  Genome genome;
  double objective = 0.0;
  double cv = 0.0;
  Extra extra{};
};

using Evaluated = Member<>;

template <class Extra>
using Population = std::vector<Member<Extra>>;

enum class Termination { eta, generation_cap };

/// Index of the first best member under the feasibility-first comparator.
template <class Extra>
std::size_t best_index(std::span<const Member<Extra>> pop, Sense sense) {
  if (pop.empty()) throw ContractViolation("best_index: empty population");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (deb_better(pop[i], pop[best], sense)) best = i;
  return best;
}

/// Draws 2*mu distinct members and keeps the winner of each consecutive pair;
/// ties go to the lower population index. Returns population indices.
template <class Extra>
std::vector<std::size_t> tournament_select(std::span<const Member<Extra>> pop, std::size_t mu,
                                           Rng& rng, Sense sense) {
  if (pop.size() < 2 * mu) throw ContractViolation("tournament_select: population smaller than 2*mu");
  std::vector<std::size_t> idx(pop.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < 2 * mu; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<std::size_t> winners;
  winners.reserve(mu);
  for (std::size_t k = 0; k < mu; ++k) {
    const std::size_t a = idx[2 * k];
    const std::size_t b = idx[2 * k + 1];
    const Preference p = compare_deb(pop[a], pop[b], sense);
    if (p == Preference::first)
      winners.push_back(a);
    else if (p == Preference::second)
      winners.push_back(b);
    else
      winners.push_back(std::min(a, b));
  }
  return winners;
}

/// Pools `r` random incumbents (first) with the offspring, ranks the pool by
/// the comparator (ties keep pool order) and writes the best `r` back into the
/// incumbents' slots.
template <class Extra>
void replace_into(Population<Extra>& pop, std::vector<Member<Extra>> offspring, std::size_t r,
                  Sense sense, Rng& rng) {
  r = std::min(r, pop.size());
  std::vector<std::size_t> idx(pop.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < r; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<std::size_t> chosen(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(r));
  std::sort(chosen.begin(), chosen.end());

  std::vector<Member<Extra>> pool;
  pool.reserve(r + offspring.size());
  for (auto i : chosen) pool.push_back(pop[i]);
  for (auto& o : offspring) pool.push_back(std::move(o));

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return deb_better(pool[a], pool[b], sense);
  });
  for (std::size_t k = 0; k < r; ++k) pop[chosen[k]] = pool[order[k]];
}

/// One steady-state generation: tournament, offspring, evaluation, replacement.
/// `evaluate(genome, population)` returns a Member. Returns evaluations used.
template <class Extra, class Eval>
std::size_t steady_state_step(Population<Extra>& pop, Eval&& evaluate, const GenomeShape& shape,
                              const EAParams& params, Rng& rng) {
  const std::span<const Member<Extra>> view(pop);
  const auto parents_idx = tournament_select(view, params.mu, rng, params.sense);
  std::vector<const Genome*> parents;
  parents.reserve(parents_idx.size());
  for (auto i : parents_idx) parents.push_back(&pop[i].genome);

  auto children = make_offspring(parents, shape, params, rng);
  std::vector<Member<Extra>> offspring;
  offspring.reserve(children.size());
  for (auto& child : children) offspring.push_back(evaluate(std::move(child), view));

  const std::size_t used = offspring.size();
  replace_into(pop, std::move(offspring), params.r, params.sense, rng);
  return used;
}

template <class Extra>
struct EvolveResult {
  Population<Extra> population;
  std::size_t best = 0;
  std::size_t evaluations = 0;
  std::size_t generations = 0;
  Termination terminated_by = Termination::generation_cap;
  double final_eta = 1.0;
};

struct NoObserver {
  template <class Pop>
  void operator()(std::size_t, const Pop&, double) const {}
};

/// Runs steady-state generations from an evaluated initial population until
/// eta <= eta_stop or the generation cap. `observe(generation, population, eta)`
/// is called after every generation.
template <class Extra, class Eval, class Observer = NoObserver>
EvolveResult<Extra> evolve(Population<Extra> initial, Eval&& evaluate, const GenomeShape& shape,
                           const EAParams& params, Rng& rng, Observer&& observe = {}) {
  if (initial.size() < 2 * params.mu) throw ContractViolation("evolve: population smaller than 2*mu");
  auto genome_of = [](const Member<Extra>& m) -> const Genome& { return m.genome; };
  const VarianceTermination termination(initial, genome_of);

  EvolveResult<Extra> out;
  out.population = std::move(initial);
  for (std::size_t gen = 1; gen <= params.max_generations; ++gen) {
    out.evaluations += steady_state_step(out.population, evaluate, shape, params, rng);
    out.generations = gen;
    out.final_eta = termination.eta(out.population, genome_of);
    observe(gen, std::as_const(out.population), out.final_eta);
    if (out.final_eta <= params.eta_stop) {
      out.terminated_by = Termination::eta;
      break;
    }
  }
  out.best = best_index(std::span<const Member<Extra>>(out.population), params.sense);
  return out;
}

template <class Extra>
struct LocalSearchResult {
  Member<Extra> best;
  std::size_t evaluations = 0;
  std::size_t accepted = 0;
};

/// Mutation-based hill climbing: a proposal replaces the incumbent only when
/// the comparator strictly prefers it; stops after `budget` consecutive
/// rejections. `evaluate(genome)` returns a Member.
template <class Extra, class Eval>
LocalSearchResult<Extra> local_search(Member<Extra> start, Eval&& evaluate, const GenomeShape& shape,
                                      const EAParams& params, std::size_t budget, Rng& rng) {
  LocalSearchResult<Extra> out{std::move(start), 0, 0};
  if (shape.size() == 0) return out;
  std::size_t failures = 0;
  while (failures < budget) {
    Genome probe = propose_neighbor(out.best.genome, shape, params, rng);
    if (probe == out.best.genome) {
      ++failures;
      continue;
    }
    Member<Extra> candidate = evaluate(std::move(probe));
    ++out.evaluations;
    if (deb_better(candidate, out.best, params.sense)) {
      out.best = std::move(candidate);
      ++out.accepted;
      failures = 0;
    } else {
      ++failures;
    }
  }
  return out;
}

}  // namespace bilevel::evo
