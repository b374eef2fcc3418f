#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bilevel/errors.hpp"
#include "bilevel/evo/compare.hpp"
#include "bilevel/evo/encoding.hpp"
#include "bilevel/evo/engine.hpp"
#include "bilevel/evo/operators.hpp"
#include "bilevel/evo/termination.hpp"

using namespace bilevel;
using namespace bilevel::evo;

namespace {

EAParams literal() {
  EAParams p;
  p.pcx_mode = PcxMode::literal;
  return p;
}

Evaluated member(double obj, double cv, std::vector<double> reals = {0.0}) {
  return Evaluated{Genome{std::move(reals), {}}, obj, cv, {}};
}

}  // namespace

TEST_CASE("feasibility-first comparator") {
  CHECK(compare_deb(5, 0, 100, 0.1, Sense::maximize) == Preference::first);
  CHECK(compare_deb(5, 0, 7, 0, Sense::maximize) == Preference::second);
  CHECK(compare_deb(9, 0.3, 1, 0.3, Sense::maximize) == Preference::equal);
  CHECK(compare_deb(5, 0, 7, 0, Sense::minimize) == Preference::first);
  CHECK(compare_deb(0, 0.5, 0, 0.2, Sense::maximize) == Preference::second);
  CHECK(compare_deb(3, 0, 3, 0, Sense::maximize) == Preference::equal);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(compare_deb(1, nan, 1, 1e9, Sense::maximize) == Preference::second);
  CHECK(compare_deb(nan, 0, -1e300, 0, Sense::maximize) == Preference::second);
}

TEST_CASE("constraint violation sums positive parts") {
  const std::vector<double> g{-1.0, 0.0, 0.25, 2.0};
  CHECK(constraint_violation(g) == doctest::Approx(2.25));
  CHECK(constraint_violation(std::vector<double>{}) == 0.0);
}

TEST_CASE("PCX literal mode") {
  auto rng = Rng(1);
  SUBCASE("identical parents") {
    const std::vector<double> x{3.0, -1.0};
    const auto c = pcx_crossover(x, x, x, literal(), rng);
    CHECK(c[0] == doctest::Approx(3.0));
    CHECK(c[1] == doctest::Approx(-1.0));
  }
  SUBCASE("hand-evaluated child") {
    const std::vector<double> xp{2, 2}, p1{0, 0}, p2{1, 2};
    const std::vector<double> g{1.0, 4.0 / 3.0};
    CHECK(pcx_omega_eta(xp, g) == doctest::Approx(5.0));
    const auto c = pcx_crossover(p1, p2, xp, literal(), rng);
    CHECK(c[0] == doctest::Approx(4.6));
    CHECK(c[1] == doctest::Approx(7.0 + 0.2 / 3.0));
  }
  SUBCASE("degenerate weight is capped") {
    const std::vector<double> xp{1, 1}, p1{1, 0}, p2{1, 2};
    const auto c = pcx_crossover(p1, p2, xp, literal(), rng);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(1.0 + kPcxOmegaEtaCap));
  }
  SUBCASE("literal mode does not consume randomness") {
    Rng a(7), b(7);
    const std::vector<double> xp{2, 2}, p1{0, 0}, p2{1, 2};
    (void)pcx_crossover(p1, p2, xp, literal(), a);
    CHECK(a() == b());
  }
}

TEST_CASE("PCX gaussian mode centres on the index parent") {
  EAParams p;
  Rng rng(3);
  const std::vector<double> xp{2, 2}, p1{0, 0}, p2{1, 2};
  double sx = 0, sy = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto c = pcx_crossover(p1, p2, xp, p, rng);
    sx += c[0];
    sy += c[1];
  }
  CHECK(sx / n == doctest::Approx(2.0).epsilon(0.01));
  CHECK(sy / n == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("polynomial mutation") {
  const std::vector<RealBound> b{{0.0, 1.0}};
  Rng rng(11);
  const std::vector<double> x{0.5};
  CHECK(polynomial_mutation(x, b, 0.0, 20, rng) == x);

  Rng r1(42), r2(42);
  const auto a = polynomial_mutation(x, b, 1.0, 20, r1);
  const auto c = polynomial_mutation(x, b, 1.0, 20, r2);
  CHECK(a == c);
  CHECK(a[0] != 0.5);

  Rng r3(5);
  for (int i = 0; i < 2000; ++i) {
    const auto y = polynomial_mutation(std::vector<double>{0.0}, b, 1.0, 20, r3);
    REQUIRE(y[0] >= 0.0);
    REQUIRE(y[0] <= 1.0);
  }
}

TEST_CASE("offset-binary encoding") {
  const IntBound b{0, 1000};
  CHECK(bit_width(b) == 10);
  CHECK(bit_width(IntBound{4, 4}) == 0);
  CHECK(encode(1000, b) == 0b1111101000u);
  CHECK(decode(1016, b) == 1000);
  CHECK(decode(1023, b) == 1000);
  const IntBound shifted{-5, 5};
  for (std::int64_t v = -5; v <= 5; ++v) CHECK(decode(encode(v, shifted), shifted) == v);
}

TEST_CASE("binary crossover and mutation bit traces") {
  const std::vector<IntBound> b{{0, 1000}};
  const std::vector<std::uint64_t> mask{0b011};
  const auto [c1, c2] = exchange_bits(std::vector<std::int64_t>{5}, std::vector<std::int64_t>{6}, b, mask);
  CHECK(c1[0] == 6);
  CHECK(c2[0] == 5);

  Rng rng(1);
  const auto [s1, s2] = binary_crossover(std::vector<std::int64_t>{7, 7}, std::vector<std::int64_t>{7, 7},
                                         std::vector<IntBound>{{0, 1000}, {0, 1000}}, 1.0, rng);
  CHECK(s1 == std::vector<std::int64_t>{7, 7});
  CHECK(s2 == std::vector<std::int64_t>{7, 7});

  const auto [h1, h2] = exchange_bits(std::vector<std::int64_t>{0}, std::vector<std::int64_t>{1000}, b,
                                      std::vector<std::uint64_t>{0b11000});
  CHECK(h1[0] == 8);
  CHECK(h2[0] == 992);

  CHECK(flip_bits(std::vector<std::int64_t>{0}, b, std::vector<std::uint64_t>{1u << 9})[0] == 512);
  CHECK(flip_bits(std::vector<std::int64_t>{1000}, b, std::vector<std::uint64_t>{1u << 4})[0] == 1000);
  CHECK(binary_mutation(std::vector<std::int64_t>{123}, b, 0.0, rng)[0] == 123);
}

TEST_CASE("variance termination") {
  std::vector<Genome> init{{{0.0, 0.0}, {}}, {{2.0, 4.0}, {}}};
  CHECK(eta(init, init) == doctest::Approx(1.0));
  std::vector<Genome> same{{{1.0, 1.0}, {}}, {{1.0, 1.0}, {}}};
  CHECK(eta(init, same) == doctest::Approx(0.0));
  const std::vector<double> v0{1.0, 1.0}, v1{0.5, 0.1};
  CHECK(variance_ratio(v0, v1) == doctest::Approx(0.3));
  const std::vector<double> grow{4.0, 4.0};
  CHECK(variance_ratio(v0, grow) == doctest::Approx(1.0));
  // A degenerate initial dimension contributes nothing.
  const std::vector<double> d0{0.0, 1.0}, d1{5.0, 0.5};
  CHECK(variance_ratio(d0, d1) == doctest::Approx(0.25));
}

TEST_CASE("tournament selection") {
  std::vector<Evaluated> pop;
  for (int i = 0; i < 6; ++i) pop.push_back(member(i == 4 ? 100.0 : 1.0, 0.0));
  Rng a(9), b(9);
  const std::span<const Evaluated> view(pop);
  const auto s1 = tournament_select(view, 3, a, Sense::maximize);
  const auto s2 = tournament_select(view, 3, b, Sense::maximize);
  CHECK(s1 == s2);
  // With 6 members and 3 pairs every member plays; the best always wins its pair.
  CHECK(std::count(s1.begin(), s1.end(), std::size_t{4}) == 1);
  CHECK_THROWS_AS(tournament_select(std::span<const Evaluated>(pop.data(), 5), 3, a, Sense::maximize),
                  ContractViolation);
}

TEST_CASE("replacement keeps the better of incumbents and offspring") {
  Rng rng(2);
  SUBCASE("infeasible offspring never displace feasible incumbents") {
    std::vector<Evaluated> pop;
    for (int i = 0; i < 10; ++i) pop.push_back(member(i, 0.0, {double(i)}));
    std::vector<Evaluated> off{member(1e9, 1.0), member(1e9, 2.0), member(1e9, 3.0)};
    replace_into(pop, off, 2, Sense::maximize, rng);
    std::vector<double> objs;
    for (const auto& m : pop) {
      CHECK(m.cv == 0.0);
      objs.push_back(m.objective);
    }
    std::sort(objs.begin(), objs.end());
    for (int i = 0; i < 10; ++i) CHECK(objs[i] == i);
  }
  SUBCASE("a dominant offspring enters") {
    std::vector<Evaluated> pop;
    for (int i = 0; i < 10; ++i) pop.push_back(member(i, 0.0));
    replace_into(pop, {member(1e9, 0.0)}, 2, Sense::maximize, rng);
    CHECK(std::any_of(pop.begin(), pop.end(), [](const Evaluated& m) { return m.objective == 1e9; }));
  }
}

TEST_CASE("population best never worsens over seeded steps") {
  GenomeShape shape{{{-5.0, 5.0}, {-5.0, 5.0}}, {}};
  EAParams p;
  p.sense = Sense::maximize;
  auto f = [](const Genome& g) { return -(g.reals[0] - 1) * (g.reals[0] - 1) - (g.reals[1] + 2) * (g.reals[1] + 2); };
  Rng rng(17);
  std::vector<Evaluated> pop;
  for (int i = 0; i < 20; ++i) {
    Genome g = random_genome(shape, rng);
    pop.push_back(Evaluated{g, f(g), 0.0, {}});
  }
  auto eval = [&](Genome g, std::span<const Evaluated>) { return Evaluated{g, f(g), 0.0, {}}; };
  double best = -1e300;
  for (const auto& m : pop) best = std::max(best, m.objective);
  for (int step = 0; step < 300; ++step) {
    steady_state_step(pop, eval, shape, p, rng);
    double now = -1e300;
    for (const auto& m : pop) now = std::max(now, m.objective);
    REQUIRE(now >= best);
    best = now;
  }
  CHECK(best > -1e-2);
}

TEST_CASE("local search") {
  GenomeShape shape{{{-10.0, 10.0}}, {}};
  EAParams p;
  Rng rng(4);
  auto eval = [](Genome g) {
    const double x = g.reals[0];
    return Evaluated{std::move(g), -(x - 3) * (x - 3), 0.0, {}};
  };
  const Evaluated start = eval(Genome{{-4.0}, {}});
  CHECK(local_search(start, eval, shape, p, 0, rng).best.objective == start.objective);
  const auto r = local_search(start, eval, shape, p, 50, rng);
  CHECK(r.best.objective >= start.objective);
  CHECK(r.best.genome.reals[0] == doctest::Approx(3.0).epsilon(1e-2));

  GenomeShape ints{{}, {{0, 20}}};
  auto ieval = [](Genome g) {
    const double x = double(g.ints[0]);
    return Evaluated{std::move(g), -(x - 7) * (x - 7), 0.0, {}};
  };
  const auto ri = local_search(ieval(Genome{{}, {15}}), ieval, ints, p, 30, rng);
  CHECK(ri.best.genome.ints[0] == 7);
}

TEST_CASE("offspring stay inside bounds") {
  GenomeShape shape{{{0.0, 1.0}, {-2.0, 2.0}}, {{0, 1000}, {-3, 3}}};
  EAParams p;
  Rng rng(8);
  std::vector<Genome> parents;
  for (int i = 0; i < 3; ++i) parents.push_back(random_genome(shape, rng));
  const std::vector<const Genome*> ptrs{&parents[0], &parents[1], &parents[2]};
  for (int i = 0; i < 500; ++i)
    for (const auto& c : make_offspring(ptrs, shape, p, rng)) REQUIRE(shape.contains(c));
}
