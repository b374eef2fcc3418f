#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bilevel {

/// Thrown when a caller breaks an operation's precondition (length mismatch,
/// population too small, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid problem or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem evaluator failed inside a solver run.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t generation, std::size_t member)
      : std::runtime_error(what + " (generation " + std::to_string(generation) +
                           ", member " + std::to_string(member) + ")"),
        generation_(generation),
        member_(member) {}

  std::size_t generation() const noexcept { return generation_; }
  std::size_t member() const noexcept { return member_; }

 private:
  std::size_t generation_;
  std::size_t member_;
};

}  // namespace bilevel
