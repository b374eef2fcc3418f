#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bilevel/evo/genome.hpp"
#include "bilevel/nested/problem.hpp"
#include "bilevel/nested/solver.hpp"

namespace bilevel::oracle {

using evo::Genome;
using evo::GenomeShape;

inline constexpr std::size_t kDefaultEvaluationCap = 100'000'000;

/// Cartesian grid: one list of candidate values per gene.
struct GridSpec {
  std::vector<std::vector<double>> real_axes;
  std::vector<std::vector<std::int64_t>> int_axes;

  /// Number of grid points; saturates at SIZE_MAX.
  std::size_t points() const;
  bool matches(const GenomeShape& shape) const;

  /// Every integer value in bounds and `real_steps + 1` evenly spaced reals per
  /// real gene (default step = range / 200).
  static GridSpec full(const GenomeShape& shape, std::size_t real_steps = 200);

  /// Window of +-int_radius integers and +-real_radius * real_step reals around
  /// `center`, clipped to the bounds.
  static GridSpec around(const Genome& center, const GenomeShape& shape, std::int64_t int_radius,
                         std::size_t real_radius = 0, double real_step = 0.0);

  /// Single point.
  static GridSpec point(const Genome& g);
};

/// Calls `visit(genome)` for every grid point in odometer order (last integer
/// axis fastest).
void for_each_point(const GridSpec& grid, const std::function<void(const Genome&)>& visit);

class NoFeasiblePoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BestResponse {
  Genome lower;
  double objective = 0.0;
  double cv = 0.0;
  std::size_t evaluations = 0;
  /// True when the optimum sits on the window boundary without touching the
  /// variable bounds, i.e. a wider window might do better.
  bool on_window_edge = false;
};

/// Exhaustive lower-level search over `grid` for a fixed upper genome.
/// Infeasible points are skipped; throws NoFeasiblePoint if none is feasible.
BestResponse best_response_grid(const nested::BilevelProblem& problem, const Genome& upper,
                                const GridSpec& grid, std::size_t evaluation_cap = kDefaultEvaluationCap);

/// Same search, but returns the least-violating point when nothing is feasible.
BestResponse best_response_any(const nested::BilevelProblem& problem, const Genome& upper,
                               const GridSpec& grid);

struct SurfaceRow {
  std::vector<double> genes;
  double objective = 0.0;
  double cv = 0.0;
};

struct GridSearchResult {
  nested::Individual best;
  std::vector<SurfaceRow> upper_surface;  // upper objective at each upper grid point with lower at its best response
  std::vector<SurfaceRow> lower_surface;  // lower objective over the lower grid at the optimal upper point
  std::size_t evaluations = 0;
  std::size_t edge_hits = 0;
};

/// Lower grid as a function of the upper point.
using LowerGridFn = std::function<GridSpec(const Genome& upper)>;

/// Full bilevel enumeration. Refuses grids whose total evaluation count
/// exceeds `evaluation_cap`.
GridSearchResult bilevel_grid_search(const nested::BilevelProblem& problem, const GridSpec& ul_grid,
                                     const LowerGridFn& ll_grid,
                                     std::size_t evaluation_cap = kDefaultEvaluationCap);

GridSearchResult bilevel_grid_search(const nested::BilevelProblem& problem, const GridSpec& ul_grid,
                                     const GridSpec& ll_grid,
                                     std::size_t evaluation_cap = kDefaultEvaluationCap);

struct Improvement {
  Genome upper;
  Genome lower;
  double upper_obj = 0.0;
  double effective_cv = 0.0;
};

struct LocalOptimumReport {
  double reference_obj = 0.0;  // candidate's upper objective with the grid best response
  double reference_cv = 0.0;
  Genome reference_lower;
  bool lower_matches = false;  // candidate.lower equals the grid best response
  std::vector<Improvement> improvements;
  std::size_t probes = 0;
  std::size_t evaluations = 0;
  std::size_t edge_hits = 0;

  bool is_local_optimum() const { return improvements.empty(); }
};

/// Probes every integer perturbation in the box of half-width `radius` and a
/// +-real_step stencil on each real gene, re-solving the lower level on the
/// grid for each probe. Lists every probe the comparator prefers over the
/// candidate. Radius 0 probes nothing.
LocalOptimumReport verify_local_optimum(const nested::BilevelProblem& problem,
                                        const nested::Individual& candidate, std::int64_t radius,
                                        const LowerGridFn& ll_grid, double real_step = 0.0,
                                        std::size_t evaluation_cap = kDefaultEvaluationCap);

}  // namespace bilevel::oracle
