#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bilevel/evo/genome.hpp"

namespace bilevel::evo {

/// Initial variances below this are treated as degenerate and contribute 0.
inline constexpr double kDegenerateVariance = 1e-12;

/// Population variance of every gene (reals first, then ints).
template <class Range, class Proj = std::identity>
std::vector<double> dimension_variances(const Range& population, Proj proj = {}) {
  // Two passes: means, then squared deviations. Reals first, then ints.
  std::vector<double> mean;
  std::size_t nr = 0;
  std::size_t n = 0;
  for (const auto& item : population) {
    const Genome& g = std::invoke(proj, item);
    if (n++ == 0) {
      nr = g.reals.size();
      mean.assign(g.size(), 0.0);
    }
    for (std::size_t i = 0; i < nr; ++i) mean[i] += g.reals[i];
    for (std::size_t i = nr; i < mean.size(); ++i) mean[i] += static_cast<double>(g.ints[i - nr]);
  }
  if (n == 0) return {};
  for (auto& m : mean) m /= static_cast<double>(n);
  std::vector<double> var(mean.size(), 0.0);
  for (const auto& item : population) {
    const Genome& g = std::invoke(proj, item);
    for (std::size_t i = 0; i < nr; ++i) {
      const double d = g.reals[i] - mean[i];
      var[i] += d * d;
    }
    for (std::size_t i = nr; i < var.size(); ++i) {
      const double d = static_cast<double>(g.ints[i - nr]) - mean[i];
      var[i] += d * d;
    }
  }
  for (auto& v : var) v /= static_cast<double>(n);
  return var;
}

/// Mean over dimensions of current/initial variance, clamped to [0, 1].
double variance_ratio(std::span<const double> initial, std::span<const double> current);

/// Records the generation-0 variances once and reports eta for later populations.
class VarianceTermination {
 public:
  template <class Range, class Proj = std::identity>
  explicit VarianceTermination(const Range& initial, Proj proj = {})
      : initial_(dimension_variances(initial, proj)) {}

  template <class Range, class Proj = std::identity>
  double eta(const Range& current, Proj proj = {}) const {
    const auto cur = dimension_variances(current, proj);
    return variance_ratio(initial_, cur);
  }

  const std::vector<double>& initial_variances() const { return initial_; }

 private:
  std::vector<double> initial_;
};

/// Convenience wrapper: eta of `current` relative to `initial`.
double eta(std::span<const Genome> initial, std::span<const Genome> current);

}  // namespace bilevel::evo
