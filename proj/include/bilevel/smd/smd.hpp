#pragma once

#include <cstddef>
#include <utility>

#include "bilevel/evo/genome.hpp"
#include "bilevel/nested/problem.hpp"
#include "bilevel/nested/solver.hpp"

namespace bilevel::smd {

/// Block sizes: the upper genome is (x_u1: p, x_u2: r), the lower genome is
/// (x_l1: q [+ s for SMD6], x_l2: r).
struct SmdDims {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t r = 0;
  std::size_t s = 0;

  std::size_t upper() const { return p + r; }
  std::size_t lower() const { return q + s + r; }
};

struct SmdInstance {
  int id = 1;
  std::size_t total_vars = 10;
  SmdDims dims;
  nested::BilevelProblem problem;
  evo::Genome upper_optimum;
  evo::Genome lower_optimum;
  double upper_optimal_value = 0.0;  // F*
  double lower_optimal_value = 0.0;  // f*
};

/// Standard split for a total of 10, 20, 30 or 40 variables.
SmdDims smd_dims(int id, std::size_t total_vars);

/// SMD1..SMD6, both levels minimized and unconstrained.
SmdInstance make_smd(int id, std::size_t total_vars);

struct Accuracy {
  double upper = 0.0;
  double lower = 0.0;
};

/// Objective-space distance of the reported best to the known optimum.
Accuracy accuracy(const nested::RunRecord& record, const SmdInstance& instance);

}  // namespace bilevel::smd
