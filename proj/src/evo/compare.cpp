#include "bilevel/evo/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bilevel::evo {

double constraint_violation(std::span<const double> constraints) {
  double cv = 0.0;
  for (double g : constraints) cv += std::max(0.0, g);
  return cv;
}

Preference compare_deb(double obj_a, double cv_a, double obj_b, double cv_b, Sense sense) {
  // NaN ranks last.
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double worst = sense == Sense::maximize ? -inf : inf;
  if (std::isnan(cv_a)) cv_a = inf;
  if (std::isnan(cv_b)) cv_b = inf;
  if (std::isnan(obj_a)) obj_a = worst;
  if (std::isnan(obj_b)) obj_b = worst;
  const bool feas_a = cv_a <= 0.0;
  const bool feas_b = cv_b <= 0.0;
  if (feas_a != feas_b) return feas_a ? Preference::first : Preference::second;
  if (!feas_a) {
    if (cv_a < cv_b) return Preference::first;
    if (cv_b < cv_a) return Preference::second;
    return Preference::equal;
  }
  if (obj_a == obj_b) return Preference::equal;
  const bool a_higher = obj_a > obj_b;
  if (sense == Sense::maximize) return a_higher ? Preference::first : Preference::second;
  return a_higher ? Preference::second : Preference::first;
}

}  // namespace bilevel::evo
