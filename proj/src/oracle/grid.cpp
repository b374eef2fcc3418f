#include "bilevel/oracle/grid.hpp"

#include <algorithm>
#include <limits>

#include "bilevel/errors.hpp"
#include "bilevel/evo/compare.hpp"

namespace bilevel::oracle {

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

struct Scored {
  double objective;
  double cv;
};

// Largest/smallest value on each axis, used to detect window-edge optima.
bool on_edge(const Genome& g, const GridSpec& grid, const GenomeShape& shape) {
  for (std::size_t i = 0; i < grid.int_axes.size(); ++i) {
    const auto& axis = grid.int_axes[i];
    if (axis.size() < 2) continue;
    const auto [lo, hi] = std::minmax_element(axis.begin(), axis.end());
    const auto v = g.ints[i];
    if ((v == *lo && v != shape.ints[i].lo) || (v == *hi && v != shape.ints[i].hi)) return true;
  }
  for (std::size_t i = 0; i < grid.real_axes.size(); ++i) {
    const auto& axis = grid.real_axes[i];
    if (axis.size() < 2) continue;
    const auto [lo, hi] = std::minmax_element(axis.begin(), axis.end());
    const auto v = g.reals[i];
    if ((v == *lo && v != shape.reals[i].lo) || (v == *hi && v != shape.reals[i].hi)) return true;
  }
  return false;
}

BestResponse search_lower(const nested::BilevelProblem& problem, const Genome& upper,
                          const GridSpec& grid, bool feasible_only) {
  if (!grid.matches(problem.lower_shape)) throw ContractViolation("lower grid does not match the lower genome");
  BestResponse best;
  bool have = false;
  for_each_point(grid, [&](const Genome& g) {
    const auto e = problem.lower_eval(upper, g);
    ++best.evaluations;
    const double cv = evo::constraint_violation(e.constraints);
    if (feasible_only && cv > 0.0) return;
    if (!have || evo::compare_deb(e.objective, cv, best.objective, best.cv, problem.lower_sense) ==
                     evo::Preference::first) {
      best.lower = g;
      best.objective = e.objective;
      best.cv = cv;
      have = true;
    }
  });
  if (!have) throw NoFeasiblePoint("no feasible lower-level grid point");
  best.on_window_edge = on_edge(best.lower, grid, problem.lower_shape);
  return best;
}

}  // namespace

std::size_t GridSpec::points() const {
  std::size_t n = 1;
  for (const auto& a : real_axes) n = saturating_mul(n, a.size());
  for (const auto& a : int_axes) n = saturating_mul(n, a.size());
  return n;
}

bool GridSpec::matches(const GenomeShape& shape) const {
  return real_axes.size() == shape.reals.size() && int_axes.size() == shape.ints.size();
}

GridSpec GridSpec::full(const GenomeShape& shape, std::size_t real_steps) {
  GridSpec g;
  for (const auto& b : shape.reals) {
    std::vector<double> axis;
    if (real_steps == 0 || b.width() == 0.0) {
      axis.push_back(b.lo);
    } else {
      for (std::size_t k = 0; k <= real_steps; ++k)
        axis.push_back(b.lo + b.width() * static_cast<double>(k) / static_cast<double>(real_steps));
    }
    g.real_axes.push_back(std::move(axis));
  }
  for (const auto& b : shape.ints) {
    std::vector<std::int64_t> axis;
    for (auto v = b.lo; v <= b.hi; ++v) axis.push_back(v);
    g.int_axes.push_back(std::move(axis));
  }
  return g;
}

GridSpec GridSpec::around(const Genome& center, const GenomeShape& shape, std::int64_t int_radius,
                          std::size_t real_radius, double real_step) {
  if (!shape.matches(center)) throw ContractViolation("grid center does not match the genome shape");
  GridSpec g;
  for (std::size_t i = 0; i < shape.reals.size(); ++i) {
    std::vector<double> axis;
    const auto r = static_cast<long>(real_radius);
    for (long k = -r; k <= r; ++k) {
      const double v = center.reals[i] + static_cast<double>(k) * real_step;
      if (shape.reals[i].contains(v)) axis.push_back(v);
    }
    if (axis.empty()) axis.push_back(shape.reals[i].clamp(center.reals[i]));
    g.real_axes.push_back(std::move(axis));
  }
  for (std::size_t i = 0; i < shape.ints.size(); ++i) {
    std::vector<std::int64_t> axis;
    const auto lo = std::max(shape.ints[i].lo, center.ints[i] - int_radius);
    const auto hi = std::min(shape.ints[i].hi, center.ints[i] + int_radius);
    for (auto v = lo; v <= hi; ++v) axis.push_back(v);
    if (axis.empty()) axis.push_back(shape.ints[i].clamp(center.ints[i]));
    g.int_axes.push_back(std::move(axis));
  }
  return g;
}

GridSpec GridSpec::point(const Genome& g) {
  GridSpec spec;
  for (double v : g.reals) spec.real_axes.push_back({v});
  for (auto v : g.ints) spec.int_axes.push_back({v});
  return spec;
}

void for_each_point(const GridSpec& grid, const std::function<void(const Genome&)>& visit) {
  const std::size_t nr = grid.real_axes.size();
  const std::size_t ni = grid.int_axes.size();
  for (const auto& a : grid.real_axes)
    if (a.empty()) return;
  for (const auto& a : grid.int_axes)
    if (a.empty()) return;

  std::vector<std::size_t> idx(nr + ni, 0);
  Genome g;
  g.reals.resize(nr);
  g.ints.resize(ni);
  auto axis_size = [&](std::size_t k) { return k < nr ? grid.real_axes[k].size() : grid.int_axes[k - nr].size(); };
  while (true) {
    for (std::size_t k = 0; k < nr; ++k) g.reals[k] = grid.real_axes[k][idx[k]];
    for (std::size_t k = 0; k < ni; ++k) g.ints[k] = grid.int_axes[k][idx[nr + k]];
    visit(g);
    std::size_t k = idx.size();
    while (k > 0) {
      --k;
      if (++idx[k] < axis_size(k)) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (idx.empty()) return;
  }
}

BestResponse best_response_grid(const nested::BilevelProblem& problem, const Genome& upper,
                                const GridSpec& grid, std::size_t evaluation_cap) {
  if (grid.points() > evaluation_cap)
    throw ConfigError("lower grid of " + std::to_string(grid.points()) + " points exceeds the evaluation cap");
  return search_lower(problem, upper, grid, true);
}

BestResponse best_response_any(const nested::BilevelProblem& problem, const Genome& upper,
                               const GridSpec& grid) {
  return search_lower(problem, upper, grid, false);
}

GridSearchResult bilevel_grid_search(const nested::BilevelProblem& problem, const GridSpec& ul_grid,
                                     const LowerGridFn& ll_grid, std::size_t evaluation_cap) {
  if (!ul_grid.matches(problem.upper_shape)) throw ContractViolation("upper grid does not match the upper genome");

  // Budget guard, using the lower grid at the first upper point as the size estimate.
  std::size_t ll_points = 0;
  bool first = true;
  for_each_point(ul_grid, [&](const Genome& u) {
    if (first) ll_points = ll_grid(u).points();
    first = false;
  });
  const std::size_t total = saturating_mul(ul_grid.points(), ll_points + 1);
  if (total > evaluation_cap)
    throw ConfigError("bilevel grid needs " + std::to_string(total) + " evaluations, above the cap of " +
                      std::to_string(evaluation_cap));

  GridSearchResult out;
  bool have = false;
  GridSpec best_lower_grid;
  for_each_point(ul_grid, [&](const Genome& u) {
    const GridSpec lg = ll_grid(u);
    const BestResponse br = best_response_any(problem, u, lg);
    out.evaluations += br.evaluations;
    if (br.on_window_edge) ++out.edge_hits;
    const auto ue = problem.upper_eval(u, br.lower);
    ++out.evaluations;
    nested::Individual ind{u, br.lower, ue.objective, evo::constraint_violation(ue.constraints),
                           br.objective, br.cv};
    out.upper_surface.push_back({evo::flatten(u), ind.upper_obj, ind.effective_cv()});
    if (!have || evo::compare_deb(ind.upper_obj, ind.effective_cv(), out.best.upper_obj,
                                  out.best.effective_cv(), problem.upper_sense) == evo::Preference::first) {
      out.best = std::move(ind);
      best_lower_grid = lg;
      have = true;
    }
  });
  if (!have) return out;

  for_each_point(best_lower_grid, [&](const Genome& l) {
    const auto le = problem.lower_eval(out.best.upper, l);
    ++out.evaluations;
    out.lower_surface.push_back({evo::flatten(l), le.objective, evo::constraint_violation(le.constraints)});
  });
  return out;
}

GridSearchResult bilevel_grid_search(const nested::BilevelProblem& problem, const GridSpec& ul_grid,
                                     const GridSpec& ll_grid, std::size_t evaluation_cap) {
  return bilevel_grid_search(problem, ul_grid, [&ll_grid](const Genome&) { return ll_grid; }, evaluation_cap);
}

LocalOptimumReport verify_local_optimum(const nested::BilevelProblem& problem,
                                        const nested::Individual& candidate, std::int64_t radius,
                                        const LowerGridFn& ll_grid, double real_step,
                                        std::size_t evaluation_cap) {
  LocalOptimumReport report;
  const auto& shape = problem.upper_shape;

  auto assess = [&](const Genome& u) {
    const GridSpec lg = ll_grid(u);
    if (lg.points() > evaluation_cap) throw ConfigError("lower grid exceeds the evaluation cap");
    const BestResponse br = best_response_any(problem, u, lg);
    report.evaluations += br.evaluations + 1;
    if (br.on_window_edge) ++report.edge_hits;
    const auto ue = problem.upper_eval(u, br.lower);
    return std::pair{br, Scored{ue.objective, evo::constraint_violation(ue.constraints) + br.cv}};
  };

  const auto [ref_br, ref] = assess(candidate.upper);
  report.reference_obj = ref.objective;
  report.reference_cv = ref.cv;
  report.reference_lower = ref_br.lower;
  report.lower_matches = ref_br.lower == candidate.lower;
  if (radius <= 0) return report;

  auto probe = [&](const Genome& u) {
    if (u == candidate.upper) return;
    ++report.probes;
    const auto [br, s] = assess(u);
    if (evo::compare_deb(s.objective, s.cv, ref.objective, ref.cv, problem.upper_sense) == evo::Preference::first)
      report.improvements.push_back({u, br.lower, s.objective, s.cv});
  };

  // Integer box around the candidate, real genes held.
  GridSpec box = GridSpec::around(candidate.upper, shape, radius);
  for (std::size_t i = 0; i < box.real_axes.size(); ++i) box.real_axes[i] = {candidate.upper.reals[i]};
  for_each_point(box, probe);

  // Real stencil, integer genes held.
  if (real_step > 0.0) {
    for (std::size_t i = 0; i < shape.reals.size(); ++i) {
      for (double dir : {-1.0, 1.0}) {
        Genome u = candidate.upper;
        u.reals[i] = shape.reals[i].clamp(u.reals[i] + dir * real_step);
        probe(u);
      }
    }
  }
  return report;
}

}  // namespace bilevel::oracle
