#include "bilevel/nested/problem.hpp"

#include "bilevel/errors.hpp"

namespace bilevel::nested {

void BilevelProblem::validate() const {
  upper_shape.validate();
  lower_shape.validate();
  if (upper_shape.size() == 0) throw ConfigError("problem '" + name + "' has an empty upper genome");
  if (!upper_eval || !lower_eval) throw ConfigError("problem '" + name + "' is missing an evaluator");
}

}  // namespace bilevel::nested
