#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bilevel/evo/genome.hpp"
#include "bilevel/evo/params.hpp"

namespace bilevel::nested {

using evo::Genome;
using evo::GenomeShape;
using evo::Sense;

/// Objective value and constraint vector (g_k <= 0 is feasible) of one level.
struct LevelEvaluation {
  double objective = 0.0;
  std::vector<double> constraints;
};

using LevelEvaluator = std::function<LevelEvaluation(const Genome& upper, const Genome& lower)>;

/// Two-level problem. Both evaluators see the full (upper, lower) pair and must
/// be pure: identical inputs give identical outputs.
struct BilevelProblem {
  std::string name;
  GenomeShape upper_shape;
  GenomeShape lower_shape;
  LevelEvaluator upper_eval;
  LevelEvaluator lower_eval;
  Sense upper_sense = Sense::maximize;
  Sense lower_sense = Sense::maximize;

  void validate() const;
};

}  // namespace bilevel::nested
