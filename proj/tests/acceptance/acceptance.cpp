// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "bilevel/bench/campaign.hpp"
#include "bilevel/bench/config.hpp"
#include "bilevel/bench/stats.hpp"
#include "bilevel/evo/compare.hpp"
#include "bilevel/evo/encoding.hpp"
#include "bilevel/evo/operators.hpp"
#include "bilevel/evo/termination.hpp"
#include "bilevel/market/model.hpp"
#include "bilevel/smd/smd.hpp"

namespace fs = std::filesystem;
using namespace bilevel;

namespace {

// Pinned tolerances and reference values.
constexpr int kTableRuns = 11;
constexpr std::int64_t kQl[2] = {486, 585};
constexpr std::int64_t kQf[2] = {463, 573};
constexpr double kIl2 = 1283.1, kMl2 = 641.55, kIf2 = 1254.2, kMf2 = 627.08;
constexpr double kPsiL = 14191.0, kPsiF = 13963.0;
constexpr double kTableTol = 0.005;
constexpr double kActiveTol = 0.001;
constexpr double kVerifyMaxSeconds = 600.0;
constexpr double kSweepTol = 0.03;
constexpr double kSweepFallbackTol = 0.05;
constexpr double kSmdWorstAcc = 1e-2;
constexpr double kSmdMedianAcc = 1e-3;
constexpr double kSmdFeLo = 0.2, kSmdFeHi = 5.0;
constexpr double kReducedFullTol = 1e-9;
constexpr double kSmdSelfTol = 1e-12;

struct SpotCell {
  int leaders, followers;
  double gross, production;
};
constexpr SpotCell kSpotCells[] = {{1, 1, 1.0900e5, 6970}, {2, 5, 1.0008e5, 12122}, {5, 5, 0.8088e5, 15210}};

struct SmdTarget {
  int id;
  double ll_fe_median;
};
constexpr SmdTarget kSmdTargets[] = {{1, 1.69e6}, {2, 1.56e6}};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Context {
  int jobs = 1;
  int sweep_runs = 5;
  fs::path work;
  bool quiet = false;
  // Shared between criteria.
  std::optional<bench::CampaignSummary> duopoly;
  std::optional<bench::SweepResult> spot_sweep;
  std::vector<std::pair<nested::RunRecord, evo::Sense>> recorded;

  bench::Log log() const {
    if (quiet) return {};
    return [](const std::string& m) { fmt::print(stderr, "  {}\n", m); };
  }

  bench::ExperimentConfig config(const std::string& preset, int runs) const {
    bench::ExperimentConfig c;
    bench::apply_preset(c, preset);
    c.runs = runs;
    c.jobs = jobs;
    c.out = work / preset;
    return c;
  }

  void keep(const bench::CampaignSummary& s, evo::Sense sense) {
    for (const auto& r : s.runs)
      if (r.ok()) recorded.emplace_back(*r.record, sense);
  }

  const bench::CampaignSummary& duopoly_campaign() {
    if (!duopoly) {
      duopoly = bench::run_campaign(config("market-1l1f-2p", kTableRuns), log());
      keep(*duopoly, evo::Sense::maximize);
    }
    return *duopoly;
  }
};

// ---- 1 -------------------------------------------------------------------

Outcome table_reproduction(Context& ctx) {
  const auto& s = ctx.duopoly_campaign();
  if (!s.market) return {false, "no completed run"};
  const auto& m = *s.market;
  const auto& l = m.leader;
  const auto& f = m.follower;
  const bool q_ok = l.strategy.q == std::vector<std::int64_t>(std::begin(kQl), std::end(kQl)) &&
                    f.strategy.q == std::vector<std::int64_t>(std::begin(kQf), std::end(kQf));
  const double e_il = rel(l.strategy.inv[0], kIl2);
  const double e_ml = rel(l.strategy.mkt[0], kMl2);
  const double e_pl = rel(l.total_net, kPsiL);
  const double e_pf = rel(f.total_net, kPsiF);
  const bool pass = q_ok && std::max({e_il, e_ml, e_pl, e_pf}) <= kTableTol;
  return {pass, fmt::format("q_l=({},{}) q_f=({},{}) I_l2={:.2f} M_l2={:.2f} Psi_l={:.2f} Psi_f={:.2f} "
                            "max rel err {:.2e} (tol {})",
                            l.strategy.q[0], l.strategy.q[1], f.strategy.q[0], f.strategy.q[1], l.strategy.inv[0],
                            l.strategy.mkt[0], l.total_net, f.total_net, std::max({e_il, e_ml, e_pl, e_pf}),
                            kTableTol)};
}

// ---- 2 -------------------------------------------------------------------

Outcome oracle_agreement(Context& ctx) {
  auto c = ctx.config("market-1l1f-2p", kTableRuns);
  c.out = ctx.work / "verify";
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = bench::cmd_verify(c, ctx.log());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool improved = !v.local.is_local_optimum();
  const bool pass = v.grid_matches && !improved && secs <= kVerifyMaxSeconds;
  return {pass, fmt::format("verdict '{}', grid matches solver: {}, radius-{} improvement: {}, {:.0f} s (limit {:.0f})",
                            v.verdict, v.grid_matches, c.verify_radius, improved, secs, kVerifyMaxSeconds)};
}

// ---- 3 -------------------------------------------------------------------

Outcome active_constraints(Context& ctx) {
  const auto& s = ctx.duopoly_campaign();
  if (!s.market) return {false, "no completed run"};
  const auto cfg = market::MarketConfig::two_period_duopoly();
  double worst = 0.0;
  std::string parts;
  auto check = [&](const char* name, const market::FirmOutcome& o, market::Side side, double table_i, double table_m) {
    const double q1 = static_cast<double>(o.strategy.q[0]);
    const auto totals = market::period_totals(cfg, s.market->leader.strategy, s.market->follower.strategy);
    // First period: nothing spent yet, so the cumulative sums are zero.
    const double gross1 = market::price(0.0, totals[0]) * q1 - market::cost(q1, 0.0);
    const double ei = rel(o.strategy.inv[0], cfg.alpha(side) * gross1);
    const double em = rel(o.strategy.mkt[0], cfg.beta(side) * gross1);
    const double ti = rel(o.strategy.inv[0], table_i);
    const double tm = rel(o.strategy.mkt[0], table_m);
    worst = std::max({worst, ei, em, ti, tm});
    parts += fmt::format(" {}: I2={:.2f} M2={:.2f} gross1={:.2f} (table dev {:.1e}/{:.1e});", name, o.strategy.inv[0],
                         o.strategy.mkt[0], gross1, ti, tm);
  };
  check("leader", s.market->leader, market::Side::leader, kIl2, kMl2);
  check("follower", s.market->follower, market::Side::follower, kIf2, kMf2);
  return {worst <= kActiveTol, fmt::format("max rel err {:.2e} (tol {});{}", worst, kActiveTol, parts)};
}

// ---- 4 -------------------------------------------------------------------

Outcome sweep_spot_checks(Context& ctx) {
  auto c = ctx.config("market-2l5f", kTableRuns);
  std::vector<std::pair<int, int>> cells;
  for (const auto& s : kSpotCells) cells.emplace_back(s.leaders, s.followers);
  ctx.spot_sweep = bench::run_sweep(c, cells, ctx.log());
  double worst = 0.0;
  std::string parts;
  for (const auto& s : kSpotCells) {
    const auto* cell = ctx.spot_sweep->find(s.leaders, s.followers);
    if (!cell || !cell->ok) return {false, fmt::format("cell ({},{}) failed", s.leaders, s.followers)};
    const double eg = rel(cell->total_gross, s.gross);
    const double ep = rel(cell->total_production, s.production);
    worst = std::max({worst, eg, ep});
    parts += fmt::format(" ({}L,{}F) gross {:.0f} vs {:.0f} ({:+.2f}%), production {:.0f} vs {:.0f} ({:+.2f}%);",
                         s.leaders, s.followers, cell->total_gross, s.gross, 100 * (cell->total_gross / s.gross - 1),
                         cell->total_production, s.production, 100 * (cell->total_production / s.production - 1));
  }
  if (worst <= kSweepTol) return {true, fmt::format("max rel err {:.2e} within {};{}", worst, kSweepTol, parts)};
  const bool fallback = worst <= kSweepFallbackTol;
  return {fallback, fmt::format("max rel err {:.2e} exceeds {}, {} fallback {};{}", worst, kSweepTol,
                                fallback ? "within" : "outside", kSweepFallbackTol, parts)};
}

// ---- 5 -------------------------------------------------------------------

Outcome market_properties(Context& ctx) {
  auto c = ctx.config("market-2l5f", ctx.sweep_runs);
  std::vector<std::pair<int, int>> cells;
  for (int n = c.sweep_leaders.lo; n <= c.sweep_leaders.hi; ++n)
    for (int m = c.sweep_followers.lo; m <= c.sweep_followers.hi; ++m)
      if (!ctx.spot_sweep || !ctx.spot_sweep->find(n, m)) cells.emplace_back(n, m);
  auto sweep = bench::run_sweep(c, cells, ctx.log());
  // Cells already solved for the spot checks keep their larger run count.
  if (ctx.spot_sweep)
    for (const auto& cell : ctx.spot_sweep->cells) sweep.cells.push_back(cell);
  std::size_t failed = 0;
  for (const auto& cell : sweep.cells) failed += cell.ok ? 0 : 1;
  const auto violations = bench::sweep_property_violations(sweep);
  std::size_t dominance = 0;
  std::set<std::string> dominance_cells;
  for (const auto& v : violations)
    if (v.find(": follower ") != std::string::npos) {
      ++dominance;
      dominance_cells.insert(v.substr(0, v.find(' ')));
    }
  std::string cells_text;
  for (const auto& c : dominance_cells) cells_text += (cells_text.empty() ? "" : " ") + c;
  std::string detail = fmt::format(
      "{} cells ({} runs each, spot cells {}), {} failed, {} violations: {} leader-vs-follower in cells [{}], "
      "{} monotonicity",
      sweep.cells.size(), ctx.sweep_runs, ctx.spot_sweep ? kTableRuns : ctx.sweep_runs, failed, violations.size(),
      dominance, cells_text, violations.size() - dominance);
  for (const auto& v : violations)
    if (v.find(": follower ") == std::string::npos) detail += "; " + v;
  return {failed == 0 && violations.empty(), detail};
}

// ---- 6 -------------------------------------------------------------------

Outcome smd_reproduction(Context& ctx) {
  bool pass = true;
  std::string detail;
  for (const auto& t : kSmdTargets) {
    auto c = ctx.config(fmt::format("smd{}", t.id), kTableRuns);
    c.vars = 10;
    const auto s = bench::run_campaign(c, ctx.log());
    ctx.keep(s, evo::Sense::minimize);
    if (s.completed() != s.runs.size() || !s.ul_accuracy) {
      pass = false;
      detail += fmt::format(" SMD{}: {} of {} runs failed;", t.id, s.runs.size() - s.completed(), s.runs.size());
      continue;
    }
    const double fe_ratio = s.ll_fe.median / t.ll_fe_median;
    const bool ok = s.ul_accuracy->worst <= kSmdWorstAcc && s.ul_accuracy->median <= kSmdMedianAcc &&
                    fe_ratio >= kSmdFeLo && fe_ratio <= kSmdFeHi;
    pass = pass && ok;
    detail += fmt::format(" SMD{}: UL acc median {:.2e} worst {:.2e}, LL FE median {:.3g} ({:.2f}x);", t.id,
                          s.ul_accuracy->median, s.ul_accuracy->worst, s.ll_fe.median, fe_ratio);
  }
  return {pass, fmt::format("limits: worst {}, median {}, FE ratio [{}, {}];{}", kSmdWorstAcc, kSmdMedianAcc, kSmdFeLo,
                            kSmdFeHi, detail)};
}

// ---- 7 -------------------------------------------------------------------

Outcome scenarios(Context& ctx) {
  auto base = ctx.config("market-2l5f", kTableRuns);
  const auto s = bench::run_campaign(base, ctx.log());
  ctx.keep(s, evo::Sense::maximize);
  if (!s.best_run) return {false, "no completed run"};
  const auto& opt = s.best().best.upper;

  auto play = [&](const evo::Genome& upper, const std::string& name) {
    auto c = base;
    c.scenario_q = upper.ints;
    c.out = ctx.work / ("scenario_" + name);
    return bench::cmd_scenario(c, ctx.log()).scenario;
  };
  const auto ref = play(opt, "reference");
  bool clamped_hi = false, clamped_lo = false;
  const auto hi = play(bench::scaled_strategy(base.market, opt, 1.5, &clamped_hi), "x1.5");
  const auto lo = play(bench::scaled_strategy(base.market, opt, 0.5, &clamped_lo), "x0.5");

  const double l_ref = ref.solution.leader.total_net, f_ref = ref.solution.follower.total_net;
  const double l_hi = hi.solution.leader.total_net, l_lo = lo.solution.leader.total_net;
  const double f_lo = lo.solution.follower.total_net, f_hi = hi.solution.follower.total_net;
  const bool pass = ref.feasible && hi.feasible && lo.feasible && l_hi < l_ref && l_lo < l_ref && f_lo > f_ref;
  return {pass, fmt::format("leader profit ref {:.1f}, x1.5 {:.1f}{}, x0.5 {:.1f}; follower profit ref {:.1f}, "
                            "x1.5 {:.1f}, x0.5 {:.1f}",
                            l_ref, l_hi, clamped_hi ? " (clamped to bounds)" : "", l_lo, f_ref, f_hi, f_lo)};
}

// ---- 8 -------------------------------------------------------------------

struct Suite {
  std::vector<std::string> failures;
  int checks = 0;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 20) failures.push_back(what);
  }
};

void comparator_preorder(Suite& s, evo::Rng& rng) {
  // Small value sets so that ties occur often.
  std::uniform_int_distribution<int> obj(-3, 3), cv(0, 3);
  std::bernoulli_distribution feasible(0.5);
  struct P {
    double o, c;
  };
  auto draw = [&] { return P{double(obj(rng)), feasible(rng) ? 0.0 : 0.5 * cv(rng)}; };
  for (int i = 0; i < 10'000; ++i) {
    const P p[3] = {draw(), draw(), draw()};
    const auto sense = i % 2 ? evo::Sense::maximize : evo::Sense::minimize;
    auto cmp = [&](const P& a, const P& b) { return evo::compare_deb(a.o, a.c, b.o, b.c, sense); };
    auto geq = [&](const P& a, const P& b) { return cmp(a, b) != evo::Preference::second; };
    for (int a = 0; a < 3; ++a) {
      s.expect(cmp(p[a], p[a]) == evo::Preference::equal, "reflexivity");
      for (int b = 0; b < 3; ++b) {
        const auto ab = cmp(p[a], p[b]), ba = cmp(p[b], p[a]);
        const bool mirrored = (ab == evo::Preference::first && ba == evo::Preference::second) ||
                              (ab == evo::Preference::second && ba == evo::Preference::first) ||
                              (ab == evo::Preference::equal && ba == evo::Preference::equal);
        s.expect(mirrored, "antisymmetry");
        for (int c = 0; c < 3; ++c)
          if (geq(p[a], p[b]) && geq(p[b], p[c])) s.expect(geq(p[a], p[c]), "transitivity");
      }
    }
  }
}

void operator_closure(Suite& s, evo::Rng& rng) {
  std::uniform_int_distribution<int> nreal(0, 4), nint(0, 4);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::uniform_int_distribution<std::int64_t> ui(-500, 500);
  evo::EAParams params;
  for (int i = 0; i < 10'000; ++i) {
    evo::GenomeShape shape;
    const int nr = nreal(rng), ni = std::max(nint(rng), nr == 0 ? 1 : 0);
    for (int k = 0; k < nr; ++k) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      shape.reals.push_back({a, a == b ? b + 1.0 : b});
    }
    for (int k = 0; k < ni; ++k) {
      std::int64_t a = ui(rng), b = ui(rng);
      if (a > b) std::swap(a, b);
      shape.ints.push_back({a, a == b ? b + 1 : b});
    }
    params.pcx_mode = i % 2 ? evo::PcxMode::gaussian : evo::PcxMode::literal;
    std::vector<evo::Genome> parents;
    for (std::size_t k = 0; k < params.mu; ++k) parents.push_back(evo::random_genome(shape, rng));
    std::vector<const evo::Genome*> ptrs;
    for (const auto& p : parents) ptrs.push_back(&p);
    for (const auto& child : evo::make_offspring(ptrs, shape, params, rng))
      s.expect(shape.contains(child), "offspring outside bounds");
    s.expect(shape.contains(evo::propose_neighbor(parents[0], shape, params, rng)), "neighbour outside bounds");
    const auto pm = evo::polynomial_mutation(parents[0].reals, shape.reals, 1.0, params.mutation_distribution_index, rng);
    for (std::size_t k = 0; k < pm.size(); ++k) s.expect(shape.reals[k].contains(pm[k]), "polynomial mutation");
    const auto [c1, c2] = evo::binary_crossover(parents[0].ints, parents[1].ints, shape.ints, 1.0, rng);
    const auto bm = evo::binary_mutation(parents[0].ints, shape.ints, 1.0, rng);
    for (std::size_t k = 0; k < shape.ints.size(); ++k) {
      s.expect(shape.ints[k].contains(c1[k]) && shape.ints[k].contains(c2[k]), "binary crossover");
      s.expect(shape.ints[k].contains(bm[k]), "binary mutation");
    }
  }
}

void eta_properties(Suite& s, evo::Rng& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0), scale(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<evo::Genome> init(20), cur(20), flat(20);
    const double k = scale(rng);
    for (std::size_t j = 0; j < init.size(); ++j) {
      init[j].reals = {u(rng), u(rng), u(rng)};
      cur[j].reals = {k * u(rng), k * u(rng), k * u(rng)};
      flat[j].reals = {1.0, 2.0, 3.0};
    }
    const double e = evo::eta(init, cur);
    s.expect(e >= 0.0 && e <= 1.0, "eta outside [0, 1]");
    s.expect(evo::eta(init, init) == 1.0, "eta(init, init) != 1");
    s.expect(evo::eta(init, flat) == 0.0, "eta of a collapsed population != 0");
    s.expect(evo::eta(flat, cur) == 0.0, "eta from a degenerate initial population != 0");
  }
}

void encoding_round_trip(Suite& s) {
  const evo::IntBound b{0, 1000};
  for (std::int64_t v = 0; v <= 1000; ++v) s.expect(evo::decode(evo::encode(v, b), b) == v, "encoding round trip");
}

void price_cost_monotonicity(Suite& s, evo::Rng& rng) {
  std::uniform_real_distribution<double> q(0.0, 5000.0), money(0.0, 20000.0), step(1e-3, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double tq = q(rng), cm = money(rng), ci = money(rng), d = step(rng);
    s.expect(market::price(cm, tq + d) < market::price(cm, tq), "price not decreasing in supply");
    s.expect(market::price(cm + d, tq) > market::price(cm, tq), "price not increasing in marketing");
    s.expect(market::cost(tq + d, ci) > market::cost(tq, ci), "cost not increasing in production");
    s.expect(market::cost(tq, ci + d) < market::cost(tq, ci), "cost not decreasing in investment");
  }
}

void reduced_vs_full(Suite& s, evo::Rng& rng) {
  std::uniform_int_distribution<int> count(1, 5), periods(1, 5);
  for (int i = 0; i < 1000; ++i) {
    market::MarketConfig c = market::MarketConfig::five_period(count(rng), count(rng));
    c.periods = periods(rng);
    c.spending = i % 2 ? market::Spending::free : market::Spending::at_limit;
    const auto problem = market::make_problem(c);
    const auto shape = market::firm_shape(c);
    const auto u = evo::random_genome(shape, rng), l = evo::random_genome(shape, rng);
    const auto up = problem.upper_eval(u, l), lo = problem.lower_eval(u, l);
    const std::vector<market::FirmStrategy> leaders(c.leaders, market::decode_strategy(u, c));
    const std::vector<market::FirmStrategy> followers(c.followers, market::decode_strategy(l, c));
    const auto full = market::evaluate_full(c, leaders, followers);
    double lsum = 0.0, fsum = 0.0;
    for (const auto& f : full.leaders) lsum += f.total_net;
    for (const auto& f : full.followers) fsum += f.total_net;
    auto close = [](double a, double b) { return std::abs(a - b) <= kReducedFullTol * std::max(1.0, std::abs(b)); };
    s.expect(close(up.objective, lsum), fmt::format("upper objective {} vs {}", up.objective, lsum));
    s.expect(close(lo.objective, fsum), fmt::format("lower objective {} vs {}", lo.objective, fsum));
    const auto gl = market::constraints(c, market::Side::leader, full.leaders[0].strategy, full.leaders[0].periods);
    const auto gf = market::constraints(c, market::Side::follower, full.followers[0].strategy, full.followers[0].periods);
    s.expect(gl.size() == up.constraints.size() && gf.size() == lo.constraints.size(), "constraint count");
    for (std::size_t k = 0; k < std::min(gl.size(), up.constraints.size()); ++k)
      s.expect(close(up.constraints[k], gl[k]), "leader constraint");
    for (std::size_t k = 0; k < std::min(gf.size(), lo.constraints.size()); ++k)
      s.expect(close(lo.constraints[k], gf[k]), "follower constraint");
  }
}

void elite_traces(Suite& s, const std::vector<std::pair<nested::RunRecord, evo::Sense>>& records) {
  for (const auto& [r, sense] : records) {
    const double sign = sense == evo::Sense::maximize ? 1.0 : -1.0;
    for (std::size_t k = 1; k < r.elite_trace.size(); ++k)
      s.expect(sign * r.elite_trace[k].upper_obj >= sign * r.elite_trace[k - 1].upper_obj,
               fmt::format("elite trace of seed {} regresses at entry {}", r.seed, k));
  }
}

void smd_self_consistency(Suite& s) {
  for (int id = 1; id <= 6; ++id)
    for (std::size_t n : {10u, 20u, 30u, 40u}) {
      const auto inst = smd::make_smd(id, n);
      const auto up = inst.problem.upper_eval(inst.upper_optimum, inst.lower_optimum);
      const auto lo = inst.problem.lower_eval(inst.upper_optimum, inst.lower_optimum);
      s.expect(std::abs(up.objective - inst.upper_optimal_value) <= kSmdSelfTol,
               fmt::format("SMD{} n={} F mismatch {}", id, n, up.objective));
      s.expect(std::abs(lo.objective - inst.lower_optimal_value) <= kSmdSelfTol,
               fmt::format("SMD{} n={} f mismatch {}", id, n, lo.objective));
    }
}

Outcome property_suites(Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  evo::Rng rng(20240601);
  Suite s;
  comparator_preorder(s, rng);
  operator_closure(s, rng);
  eta_properties(s, rng);
  encoding_round_trip(s);
  price_cost_monotonicity(s, rng);
  reduced_vs_full(s, rng);
  elite_traces(s, ctx.recorded);
  smd_self_consistency(s);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = fmt::format("{} checks over {} recorded runs, {} failures, {:.1f} s", s.checks,
                                   ctx.recorded.size(), s.failures.size(), secs);
  for (const auto& f : s.failures) detail += "; " + f;
  return {s.failures.empty() && secs < 60.0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the bilevel solver"};
  std::vector<int> only;
  Context ctx;
  std::string work = "acceptance_work";
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 8));
  app.add_option("--jobs", ctx.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--sweep-runs", ctx.sweep_runs, "Runs per cell in the full sweep")->check(CLI::PositiveNumber);
  app.add_option("--work", work, "Scratch directory for command outputs");
  app.add_flag("--quiet", ctx.quiet, "No progress output");
  CLI11_PARSE(app, argc, argv);
  ctx.work = work;

  const std::set<int> selected = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8}
                                              : std::set<int>(only.begin(), only.end());
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome(Context&)> run;
  };
  // Property suites go last so that the elite-trace check sees every recorded run.
  const std::vector<Criterion> criteria = {
      {1, "optimal duopoly decisions", table_reproduction},
      {3, "active budget constraints", active_constraints},
      {2, "grid oracle agreement", oracle_agreement},
      {6, "SMD1/SMD2 accuracy and cost", smd_reproduction},
      {7, "non-optimal leader scenarios", scenarios},
      {4, "sweep spot checks", sweep_spot_checks},
      {5, "market properties across the sweep", market_properties},
      {8, "property suites", property_suites},
  };

  std::vector<std::pair<int, std::string>> lines;
  for (const auto& c : criteria) {
    if (!selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto line = fmt::format("[{}] criterion {} ({}): {} [{:.0f} s]", o.pass ? "PASS" : "FAIL", c.id, c.name,
                            o.detail, secs);
    fmt::print("{}\n", line);
    std::fflush(stdout);
    lines.emplace_back(c.id, std::move(line));
  }

  std::sort(lines.begin(), lines.end());
  fmt::print("\nsummary\n");
  int failed = 0;
  for (const auto& [id, line] : lines) {
    fmt::print("{}\n", line);
    failed += line.starts_with("[FAIL]") ? 1 : 0;
  }
  fmt::print("{} of {} criteria passed\n", lines.size() - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
