#include "bilevel/bench/stats.hpp"

#include <algorithm>

#include "bilevel/errors.hpp"

namespace bilevel::bench {

double median(std::vector<double> values) {
  if (values.empty()) throw ContractViolation("median of an empty set");
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Spread spread(const std::vector<double>& values) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return Spread{*lo, median(values), *hi, values.size()};
}

}  // namespace bilevel::bench
