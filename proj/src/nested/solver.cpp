#include "bilevel/nested/solver.hpp"

#include <limits>
#include <utility>

#include "bilevel/errors.hpp"
#include "bilevel/evo/compare.hpp"

namespace bilevel::nested {

namespace {

struct LowerInfo {
  Genome lower;
  double lower_obj = 0.0;
  double lower_cv = 0.0;
  double upper_cv = 0.0;
};

using UpperMember = evo::Member<LowerInfo>;
using LowerMember = evo::Member<>;

Individual to_individual(const UpperMember& m) {
  return Individual{m.genome, m.extra.lower, m.objective, m.extra.upper_cv, m.extra.lower_obj,
                    m.extra.lower_cv};
}

template <class Range, class Proj>
std::size_t nearest_by(const Range& pop, Proj genome_of, const Genome& query,
                       const GenomeShape& shape) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  for (const auto& m : pop) {
    const double d = evo::normalized_distance(genome_of(m), query, shape);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
    ++i;
  }
  return best;
}

// Evaluator failures are re-thrown with the position they occurred at.
template <class F>
auto guarded(std::size_t generation, std::size_t member, F&& f) {
  try {
    return f();
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(e.what(), generation, member);
  }
}

}  // namespace

std::size_t nearest_index(std::span<const Individual> pop, const Genome& upper,
                          const GenomeShape& shape) {
  if (pop.empty()) throw ContractViolation("nearest_member: empty population");
  return nearest_by(pop, [](const Individual& m) -> const Genome& { return m.upper; }, upper, shape);
}

const Individual& nearest_member(std::span<const Individual> pop, const Genome& upper,
                                 const GenomeShape& shape) {
  return pop[nearest_index(pop, upper, shape)];
}

Individual evaluate_pair(const BilevelProblem& problem, const Genome& upper, const Genome& lower) {
  const auto ue = problem.upper_eval(upper, lower);
  const auto le = problem.lower_eval(upper, lower);
  return Individual{upper,
                    lower,
                    ue.objective,
                    evo::constraint_violation(ue.constraints),
                    le.objective,
                    evo::constraint_violation(le.constraints)};
}

LowerResult lower_solve(const BilevelProblem& problem, const Genome& upper,
                        const std::optional<Genome>& warm, const EAParams& ll_params, Rng& rng,
                        const SolverOptions& options) {
  EAParams params = ll_params;
  params.sense = problem.lower_sense;
  const GenomeShape& shape = problem.lower_shape;
  if (!problem.upper_shape.contains(upper))
    throw ContractViolation("lower_solve: upper genome outside its bounds");

  std::size_t fe = 0;
  auto evaluate = [&](Genome g) {
    const auto e = problem.lower_eval(upper, g);
    ++fe;
    const double cv = evo::constraint_violation(e.constraints);
    return LowerMember{std::move(g), e.objective, cv, {}};
  };

  evo::Population<std::monostate> pop;
  pop.reserve(params.pop_size);
  const std::size_t random_count = warm ? params.pop_size - 1 : params.pop_size;
  for (std::size_t i = 0; i < random_count; ++i) pop.push_back(evaluate(evo::random_genome(shape, rng)));
  if (warm) pop.push_back(evaluate(shape.clamp(*warm)));

  auto result = evo::evolve(
      std::move(pop), [&](Genome g, std::span<const LowerMember>) { return evaluate(std::move(g)); },
      shape, params, rng);

  auto polished = evo::local_search(result.population[result.best], evaluate, shape, params,
                                    options.lower_local_search_budget, rng);

  LowerResult out;
  out.genome = std::move(polished.best.genome);
  out.objective = polished.best.objective;
  out.cv = polished.best.cv;
  out.evaluations = fe;
  out.generations = result.generations;
  out.terminated_by = result.terminated_by;
  return out;
}

RunRecord solve(const BilevelProblem& problem, EAParams ul_params, EAParams ll_params,
                std::uint64_t seed, const SolverOptions& options) {
  problem.validate();
  ul_params.sense = problem.upper_sense;
  ll_params.sense = problem.lower_sense;
  ul_params.validate();
  ll_params.validate();

  Rng rng(seed);
  RunRecord rec;
  rec.seed = seed;

  std::size_t generation = 0;
  std::size_t member = 0;

  auto make_member = [&](Genome u, const LowerResult& lr) {
    rec.ll_fe += lr.evaluations;
    const auto ue = problem.upper_eval(u, lr.genome);
    ++rec.ul_fe;
    LowerInfo info{lr.genome, lr.objective, lr.cv, evo::constraint_violation(ue.constraints)};
    const double cv = info.upper_cv + info.lower_cv;
    return UpperMember{std::move(u), ue.objective, cv, std::move(info)};
  };

  // Step 1: random upper population, each with a cold lower-level solve.
  evo::Population<LowerInfo> pop;
  pop.reserve(ul_params.pop_size);
  for (member = 0; member < ul_params.pop_size; ++member) {
    pop.push_back(guarded(generation, member, [&] {
      Genome u = evo::random_genome(problem.upper_shape, rng);
      const LowerResult lr = lower_solve(problem, u, std::nullopt, ll_params, rng, options);
      ++rec.ll_calls;
      return make_member(std::move(u), lr);
    }));
  }

  auto record_elite = [&](std::size_t gen, const evo::Population<LowerInfo>& p) {
    const auto& e = p[evo::best_index(std::span<const UpperMember>(p), ul_params.sense)];
    rec.elite_trace.push_back({gen, e.objective, e.extra.lower_obj});
  };
  record_elite(0, pop);
  rec.eta_trace.push_back({0, 1.0});

  // Steps 2-7. The offspring's lower population is warm-started from the
  // nearest upper member's lower optimum.
  auto offspring_eval = [&](Genome u, std::span<const UpperMember> current) {
    const std::size_t k = member++;
    return guarded(generation + 1, k, [&] {
      const auto& near = current[nearest_by(
          current, [](const UpperMember& m) -> const Genome& { return m.genome; }, u,
          problem.upper_shape)];
      const LowerResult lr = lower_solve(problem, u, near.extra.lower, ll_params, rng, options);
      ++rec.ll_calls;
      return make_member(std::move(u), lr);
    });
  };
  auto observe = [&](std::size_t gen, const evo::Population<LowerInfo>& p, double eta) {
    generation = gen;
    member = 0;
    rec.eta_trace.push_back({gen, eta});
    record_elite(gen, p);
  };
  member = 0;
  auto result = evo::evolve(std::move(pop), offspring_eval, problem.upper_shape, ul_params, rng, observe);
  rec.generations = result.generations;
  rec.terminated_by = result.terminated_by;

  // Post-termination local search at the upper level, re-solving the lower
  // level for every probe.
  UpperMember elite = result.population[result.best];
  const Genome warm_lower = elite.extra.lower;
  auto ls_eval = [&](Genome u) {
    return guarded(generation, 0, [&] {
      const LowerResult lr = lower_solve(problem, u, warm_lower, ll_params, rng, options);
      ++rec.ll_calls;
      ++rec.local_search_calls;
      return make_member(std::move(u), lr);
    });
  };
  auto upper_ls = evo::local_search(std::move(elite), ls_eval, problem.upper_shape, ul_params,
                                    options.upper_local_search_budget, rng);
  elite = std::move(upper_ls.best);
  if (upper_ls.accepted > 0)
    rec.elite_trace.push_back({rec.generations, elite.objective, elite.extra.lower_obj});

  // Final lower-level polish of the elite's follower response.
  const Genome& u = elite.genome;
  std::size_t lower_fe = 0;
  auto lower_eval = [&](Genome g) {
    const auto e = problem.lower_eval(u, g);
    ++lower_fe;
    return LowerMember{std::move(g), e.objective, evo::constraint_violation(e.constraints), {}};
  };
  LowerMember start{elite.extra.lower, elite.extra.lower_obj, elite.extra.lower_cv, {}};
  auto lower_ls = evo::local_search(std::move(start), lower_eval, problem.lower_shape, ll_params,
                                    options.lower_local_search_budget, rng);
  rec.ll_fe += lower_fe;
  if (lower_ls.accepted > 0) {
    LowerResult lr;
    lr.genome = lower_ls.best.genome;
    lr.objective = lower_ls.best.objective;
    lr.cv = lower_ls.best.cv;
    elite = make_member(elite.genome, lr);
  }

  rec.best = to_individual(elite);
  return rec;
}

}  // namespace bilevel::nested
