#include "bilevel/evo/termination.hpp"

#include "bilevel/errors.hpp"

namespace bilevel::evo {

double variance_ratio(std::span<const double> initial, std::span<const double> current) {
  if (initial.size() != current.size()) throw ContractViolation("eta: dimension mismatch");
  if (initial.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < initial.size(); ++i)
    if (initial[i] >= kDegenerateVariance) sum += current[i] / initial[i];
  const double mean = sum / static_cast<double>(initial.size());
  return std::clamp(mean, 0.0, 1.0);
}

double eta(std::span<const Genome> initial, std::span<const Genome> current) {
  if (initial.empty() || current.empty()) throw ContractViolation("eta: empty population");
  return VarianceTermination(initial).eta(current);
}

}  // namespace bilevel::evo
