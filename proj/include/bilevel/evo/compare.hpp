#pragma once

#include <span>

#include "bilevel/evo/params.hpp"

namespace bilevel::evo {

enum class Preference { first, second, equal };

/// Sum of max(0, g_k); zero iff every constraint g_k <= 0 holds.
double constraint_violation(std::span<const double> constraints);

/// Feasibility-first comparison: a feasible point beats any infeasible one,
/// smaller violation wins between infeasible points, and the better objective
/// under `sense` wins between feasible points.
Preference compare_deb(double obj_a, double cv_a, double obj_b, double cv_b, Sense sense);

template <class A, class B>
Preference compare_deb(const A& a, const B& b, Sense sense) {
  return compare_deb(a.objective, a.cv, b.objective, b.cv, sense);
}

/// Strict "a is preferred over b".
template <class A, class B>
bool deb_better(const A& a, const B& b, Sense sense) {
  return compare_deb(a, b, sense) == Preference::first;
}

}  // namespace bilevel::evo
