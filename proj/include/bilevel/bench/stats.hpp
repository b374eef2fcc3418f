#pragma once

#include <vector>

namespace bilevel::bench {

struct Spread {
  double best = 0.0;
  double median = 0.0;
  double worst = 0.0;
  std::size_t count = 0;
};

/// Median of the values; the mean of the middle pair for an even count.
/// Throws ContractViolation on an empty input.
double median(std::vector<double> values);

/// Order statistics of a metric where smaller is better (FE counts, accuracy).
/// An empty input gives an all-zero spread with count 0.
Spread spread(const std::vector<double>& values);

}  // namespace bilevel::bench
