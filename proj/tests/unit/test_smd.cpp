#include <doctest.h>

#include "bilevel/errors.hpp"
#include "bilevel/smd/smd.hpp"

using namespace bilevel;
using namespace bilevel::smd;

TEST_CASE("SMD known optima are self-consistent") {
  for (int id = 1; id <= 6; ++id) {
    for (std::size_t n : {10u, 20u}) {
      CAPTURE(id);
      CAPTURE(n);
      const auto inst = make_smd(id, n);
      REQUIRE(inst.problem.upper_shape.contains(inst.upper_optimum));
      REQUIRE(inst.problem.lower_shape.contains(inst.lower_optimum));
      const auto F = inst.problem.upper_eval(inst.upper_optimum, inst.lower_optimum).objective;
      const auto f = inst.problem.lower_eval(inst.upper_optimum, inst.lower_optimum).objective;
      CHECK(std::abs(F - inst.upper_optimal_value) <= 1e-12);
      CHECK(std::abs(f - inst.lower_optimal_value) <= 1e-12);
    }
  }
}

TEST_CASE("SMD dimension split") {
  const auto d = smd_dims(1, 10);
  CHECK(d.p == 3);
  CHECK(d.q == 3);
  CHECK(d.r == 2);
  CHECK(d.upper() == 5);
  CHECK(d.lower() == 5);
  const auto d6 = smd_dims(6, 10);
  CHECK(d6.q + d6.s == 3);
  CHECK(d6.s == 2);
  const auto d20 = smd_dims(2, 20);
  CHECK(d20.upper() == 10);
  CHECK(d20.lower() == 10);
}

TEST_CASE("SMD lower optimum is a best response") {
  // Around the optimum, perturbing the lower genome never improves f.
  for (int id = 1; id <= 6; ++id) {
    const auto inst = make_smd(id, 10);
    const double f0 = inst.problem.lower_eval(inst.upper_optimum, inst.lower_optimum).objective;
    for (std::size_t i = 0; i < inst.lower_optimum.reals.size(); ++i) {
      for (double step : {-1e-3, 1e-3}) {
        auto l = inst.lower_optimum;
        l.reals[i] += step;
        if (!inst.problem.lower_shape.contains(l)) continue;
        CHECK(inst.problem.lower_eval(inst.upper_optimum, l).objective >= f0);
      }
    }
  }
}

TEST_CASE("SMD configuration errors") {
  CHECK_THROWS_AS(make_smd(7, 10), ConfigError);
  CHECK_THROWS_AS(make_smd(1, 12), ConfigError);
}

TEST_CASE("accuracy is the objective distance") {
  const auto inst = make_smd(1, 10);
  nested::RunRecord r;
  r.best.upper_obj = 0.0;
  r.best.lower_obj = 0.0;
  CHECK(accuracy(r, inst).upper == 0.0);
  CHECK(accuracy(r, inst).lower == 0.0);
  r.best.upper_obj = 2.5e-4;
  CHECK(accuracy(r, inst).upper == doctest::Approx(2.5e-4));
}
