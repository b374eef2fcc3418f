#include "bilevel/bench/campaign.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "bilevel/bench/records.hpp"
#include "bilevel/errors.hpp"
#include "bilevel/evo/compare.hpp"
#include "bilevel/smd/smd.hpp"

namespace bilevel::bench {

namespace {

// Serializes log output from worker threads.
Log locked(const Log& log) {
  if (!log) return [](const std::string&) {};
  auto m = std::make_shared<std::mutex>();
  return [m, log](const std::string& s) {
    std::lock_guard lock(*m);
    log(s);
  };
}

std::string run_file_name(std::size_t i) { return fmt::format("run_{:03}.json", i); }

RunOutcome solve_one(const nested::BilevelProblem& problem, const ExperimentConfig& config, std::size_t i) {
  RunOutcome out;
  out.index = i;
  out.seed = config.seed + i;
  try {
    out.record = nested::solve(problem, config.ul, config.ll, out.seed, config.solver);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

void finish_summary(CampaignSummary& s, const ExperimentConfig& config, const nested::BilevelProblem& problem) {
  std::vector<double> ul, ll, calls, per_call, ul_acc, ll_acc;
  std::optional<smd::SmdInstance> inst;
  if (config.kind == ProblemKind::smd) inst = smd::make_smd(config.smd_id, config.vars);
  for (const auto& r : s.runs) {
    if (!r.ok()) continue;
    ul.push_back(static_cast<double>(r.record->ul_fe));
    ll.push_back(static_cast<double>(r.record->ll_fe));
    calls.push_back(static_cast<double>(r.record->ll_calls));
    if (r.record->ll_calls > 0)
      per_call.push_back(static_cast<double>(r.record->ll_fe) / static_cast<double>(r.record->ll_calls));
    if (inst) {
      const auto a = smd::accuracy(*r.record, *inst);
      ul_acc.push_back(a.upper);
      ll_acc.push_back(a.lower);
    }
  }
  s.ul_fe = spread(ul);
  s.ll_fe = spread(ll);
  s.ll_calls = spread(calls);
  s.ll_fe_per_call = per_call.empty() ? 0.0 : median(per_call);
  if (inst) {
    s.ul_accuracy = spread(ul_acc);
    s.ll_accuracy = spread(ll_acc);
  }
  s.best_run = best_run_index(s.runs, problem.upper_sense);
  if (s.best_run && config.kind == ProblemKind::market)
    s.market = market::describe(config.market, s.best().best.upper, s.best().best.lower);
}

Json spread_json(const Spread& s) {
  return Json{{"best", s.best}, {"median", s.median}, {"worst", s.worst}, {"count", s.count}};
}

Json run_file_json(const RunOutcome& r, const CampaignSummary& s, const ExperimentConfig& config) {
  Json j{{"problem", s.problem}, {"index", r.index}, {"seed", r.seed}, {"record", record_to_json(*r.record)}};
  if (config.kind == ProblemKind::market)
    j["market"] = market_solution_to_json(market::describe(config.market, r.record->best.upper, r.record->best.lower));
  if (config.kind == ProblemKind::smd) {
    const auto a = smd::accuracy(*r.record, smd::make_smd(config.smd_id, config.vars));
    j["accuracy"] = Json{{"upper", a.upper}, {"lower", a.lower}};
  }
  return j;
}

void write_surface(const std::filesystem::path& file, const std::vector<oracle::SurfaceRow>& rows) {
  CsvRow header;
  const std::size_t genes = rows.empty() ? 0 : rows.front().genes.size();
  for (std::size_t g = 0; g < genes; ++g) header.push_back(fmt::format("x{}", g + 1));
  header.emplace_back("objective");
  header.emplace_back("cv");
  std::vector<CsvRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    CsvRow row;
    for (double v : r.genes) row.push_back(format_double(v));
    row.push_back(format_double(r.objective));
    row.push_back(format_double(r.cv));
    out.push_back(std::move(row));
  }
  write_csv(file, header, out);
}

oracle::GridSpec window(const evo::Genome& center, const evo::GenomeShape& shape, std::int64_t radius,
                        double real_step) {
  const auto real_radius = real_step > 0.0 ? static_cast<std::size_t>(radius) : 0;
  return oracle::GridSpec::around(center, shape, radius, real_radius, real_step);
}

evo::Genome midpoint(const evo::GenomeShape& shape) {
  evo::Genome g;
  for (const auto& b : shape.reals) g.reals.push_back(0.5 * (b.lo + b.hi));
  for (const auto& b : shape.ints) g.ints.push_back(b.lo + (b.hi - b.lo) / 2);
  return g;
}

}  // namespace

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t width = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (width <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < width; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::size_t CampaignSummary::completed() const {
  return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const RunOutcome& r) { return r.ok(); }));
}

std::vector<std::size_t> CampaignSummary::failed() const {
  std::vector<std::size_t> out;
  for (const auto& r : runs)
    if (!r.ok()) out.push_back(r.index);
  return out;
}

const nested::RunRecord& CampaignSummary::best() const {
  if (!best_run) throw ContractViolation("campaign has no completed run");
  return *runs[*best_run].record;
}

std::optional<std::size_t> best_run_index(const std::vector<RunOutcome>& runs, evo::Sense upper_sense) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].ok()) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& a = runs[i].record->best;
    const auto& b = runs[*best].record->best;
    if (evo::compare_deb(a.upper_obj, a.effective_cv(), b.upper_obj, b.effective_cv(), upper_sense) ==
        evo::Preference::first)
      best = i;
  }
  return best;
}

CampaignSummary run_campaign(const ExperimentConfig& config, const Log& log) {
  config.validate();
  const auto problem = config.problem();
  const Log say = locked(log);
  CampaignSummary s;
  s.problem = problem.name;
  s.runs.resize(static_cast<std::size_t>(config.runs));
  parallel_for(s.runs.size(), config.jobs, [&](std::size_t i) {
    s.runs[i] = solve_one(problem, config, i);
    const auto& r = s.runs[i];
    if (r.ok())
      say(fmt::format("{} run {} seed {}: F={:.6g} f={:.6g} UL FE {} LL FE {}", s.problem, i, r.seed,
                      r.record->best.upper_obj, r.record->best.lower_obj, r.record->ul_fe, r.record->ll_fe));
    else
      say(fmt::format("{} run {} seed {} failed: {}", s.problem, i, r.seed, r.error));
  });
  finish_summary(s, config, problem);
  return s;
}

Json summary_to_json(const CampaignSummary& s, const ExperimentConfig& config) {
  Json runs = Json::array();
  for (const auto& r : s.runs) {
    Json j{{"index", r.index}, {"seed", r.seed}, {"ok", r.ok()}};
    if (r.ok()) {
      j["file"] = run_file_name(r.index);
      j["ul_fe"] = r.record->ul_fe;
      j["ll_fe"] = r.record->ll_fe;
      j["upper_obj"] = r.record->best.upper_obj;
      j["lower_obj"] = r.record->best.lower_obj;
    } else {
      j["error"] = r.error;
    }
    runs.push_back(std::move(j));
  }
  Json j{{"kind", "campaign"},
         {"problem", s.problem},
         {"config", to_json(config)},
         {"completed", s.completed()},
         {"failed", s.failed()},
         {"runs", runs},
         {"ul_fe", spread_json(s.ul_fe)},
         {"ll_fe", spread_json(s.ll_fe)},
         {"ll_calls", spread_json(s.ll_calls)},
         {"ll_fe_per_call", s.ll_fe_per_call}};
  j["best_run"] = s.best_run ? Json(*s.best_run) : Json(nullptr);
  if (s.best_run) j["best"] = individual_to_json(s.best().best);
  if (s.ul_accuracy) j["ul_accuracy"] = spread_json(*s.ul_accuracy);
  if (s.ll_accuracy) j["ll_accuracy"] = spread_json(*s.ll_accuracy);
  if (s.market) j["market"] = market_solution_to_json(*s.market);
  return j;
}

CampaignSummary cmd_run(const ExperimentConfig& config, const Log& log) {
  config.validate();
  ensure_writable_dir(config.out);
  CampaignSummary s = run_campaign(config, log);
  for (const auto& r : s.runs)
    if (r.ok()) write_json(config.out / run_file_name(r.index), run_file_json(r, s, config));
  write_json(config.out / "summary.json", summary_to_json(s, config));
  if (s.market) write_csv(config.out / "series.csv", market_series_header(), market_series_rows(*s.market));
  return s;
}

// ---- sweep ---------------------------------------------------------------

const SweepCell* SweepResult::find(int leaders, int followers) const {
  for (const auto& c : cells)
    if (c.leaders == leaders && c.followers == followers) return &c;
  return nullptr;
}

SweepResult run_sweep(const ExperimentConfig& config, std::vector<std::pair<int, int>> cells, const Log& log) {
  config.validate();
  if (config.kind != ProblemKind::market) throw ConfigError("sweep needs a market preset");
  if (cells.empty())
    for (int n = config.sweep_leaders.lo; n <= config.sweep_leaders.hi; ++n)
      for (int m = config.sweep_followers.lo; m <= config.sweep_followers.hi; ++m) cells.emplace_back(n, m);

  std::vector<ExperimentConfig> configs;
  std::vector<nested::BilevelProblem> problems;
  for (auto [n, m] : cells) {
    ExperimentConfig c = config;
    c.market.leaders = n;
    c.market.followers = m;
    c.validate();
    problems.push_back(c.problem());
    configs.push_back(std::move(c));
  }

  const auto runs = static_cast<std::size_t>(config.runs);
  std::vector<RunOutcome> outcomes(cells.size() * runs);
  const Log say = locked(log);
  parallel_for(outcomes.size(), config.jobs, [&](std::size_t k) {
    const std::size_t cell = k / runs;
    outcomes[k] = solve_one(problems[cell], configs[cell], k % runs);
    const auto& r = outcomes[k];
    say(fmt::format("{} run {}: {}", problems[cell].name, r.index,
                    r.ok() ? fmt::format("F={:.6g}", r.record->best.upper_obj) : "failed: " + r.error));
  });

  SweepResult out;
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    SweepCell c;
    c.leaders = cells[cell].first;
    c.followers = cells[cell].second;
    std::vector<RunOutcome> mine(outcomes.begin() + static_cast<std::ptrdiff_t>(cell * runs),
                                 outcomes.begin() + static_cast<std::ptrdiff_t>((cell + 1) * runs));
    for (const auto& r : mine) c.completed_runs += r.ok() ? 1 : 0;
    if (auto best = best_run_index(mine, problems[cell].upper_sense)) {
      c.ok = true;
      c.best = mine[*best].record->best;
      c.solution = market::describe(configs[cell].market, c.best.upper, c.best.lower);
      c.total_gross = c.solution.total_gross;
      c.total_production = c.solution.total_production;
    } else {
      c.error = mine.empty() ? "no runs" : mine.front().error;
    }
    out.cells.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> sweep_property_violations(const SweepResult& sweep, double tolerance) {
  std::vector<std::string> v;
  auto worse = [&](double later, double earlier) { return later > earlier + tolerance * std::max(1.0, std::abs(earlier)); };

  for (const auto& c : sweep.cells) {
    if (!c.ok) continue;
    const auto& L = c.solution.leader;
    const auto& F = c.solution.follower;
    for (std::size_t t = 0; t < L.periods.size(); ++t) {
      if (L.strategy.q[t] < F.strategy.q[t])
        v.push_back(fmt::format("({}L,{}F) period {}: follower produces {} > leader {}", c.leaders, c.followers,
                                t + 1, F.strategy.q[t], L.strategy.q[t]));
      if (worse(F.periods[t].gross, L.periods[t].gross))
        v.push_back(fmt::format("({}L,{}F) period {}: follower gross {:.2f} > leader {:.2f}", c.leaders,
                                c.followers, t + 1, F.periods[t].gross, L.periods[t].gross));
    }
  }

  auto compare_step = [&](const SweepCell& a, const SweepCell& b, const char* axis) {
    const std::string where = fmt::format("({}L,{}F) -> ({}L,{}F)", a.leaders, a.followers, b.leaders, b.followers);
    for (const auto& [side, fa, fb] : {std::tuple{"leader", &a.solution.leader, &b.solution.leader},
                                       std::tuple{"follower", &a.solution.follower, &b.solution.follower}}) {
      if (fb->total_q > fa->total_q)
        v.push_back(fmt::format("{}: individual {} production rises with {} ({} -> {})", where, side, axis,
                                fa->total_q, fb->total_q));
      if (worse(fb->total_gross, fa->total_gross))
        v.push_back(fmt::format("{}: individual {} gross profit rises with {} ({:.2f} -> {:.2f})", where, side,
                                axis, fa->total_gross, fb->total_gross));
    }
    if (!(b.total_production > a.total_production))
      v.push_back(fmt::format("{}: total production does not increase with {} ({} -> {})", where, axis,
                              a.total_production, b.total_production));
  };

  for (const auto& a : sweep.cells) {
    if (!a.ok) continue;
    if (const auto* b = sweep.find(a.leaders + 1, a.followers); b && b->ok) compare_step(a, *b, "N");
    if (const auto* b = sweep.find(a.leaders, a.followers + 1); b && b->ok) compare_step(a, *b, "M");
  }
  return v;
}

SweepResult cmd_sweep(const ExperimentConfig& config, const Log& log) {
  config.validate();
  ensure_writable_dir(config.out);
  SweepResult sweep = run_sweep(config, {}, log);

  const Range& rows = config.sweep_leaders;
  const Range& cols = config.sweep_followers;
  auto matrix = [&](const std::filesystem::path& file, auto value) {
    CsvRow header{"leaders"};
    for (int m = cols.lo; m <= cols.hi; ++m) header.push_back(fmt::format("{}F", m));
    std::vector<CsvRow> out;
    for (int n = rows.lo; n <= rows.hi; ++n) {
      CsvRow row{fmt::format("{}L", n)};
      for (int m = cols.lo; m <= cols.hi; ++m) {
        const auto* c = sweep.find(n, m);
        row.push_back(c && c->ok ? format_double(value(*c)) : "");
      }
      out.push_back(std::move(row));
    }
    write_csv(file, header, out);
  };
  matrix(config.out / "gross.csv", [](const SweepCell& c) { return c.total_gross; });
  matrix(config.out / "production.csv", [](const SweepCell& c) { return c.total_production; });

  std::vector<CsvRow> series;
  Json cells = Json::array();
  for (const auto& c : sweep.cells) {
    Json j{{"leaders", c.leaders}, {"followers", c.followers}, {"ok", c.ok}, {"completed_runs", c.completed_runs}};
    if (c.ok) {
      const CsvRow prefix{std::to_string(c.leaders), std::to_string(c.followers)};
      for (auto& row : market_series_rows(c.solution, prefix)) series.push_back(std::move(row));
      j["total_gross"] = c.total_gross;
      j["total_production"] = c.total_production;
      j["best"] = individual_to_json(c.best);
      j["market"] = market_solution_to_json(c.solution);
    } else {
      j["error"] = c.error;
    }
    cells.push_back(std::move(j));
  }
  write_csv(config.out / "sweep_series.csv", market_series_header({"leaders", "followers"}), series);
  write_json(config.out / "sweep.json", Json{{"kind", "sweep"},
                                              {"config", to_json(config)},
                                              {"cells", cells},
                                              {"violations", sweep_property_violations(sweep)}});
  return sweep;
}

// ---- scenario ------------------------------------------------------------

ScenarioReport solve_scenario(const ExperimentConfig& config, const evo::Genome& upper, std::size_t restarts) {
  if (config.kind != ProblemKind::market) throw ConfigError("scenario needs a market preset");
  const auto problem = config.problem();
  if (!problem.upper_shape.matches(upper)) throw ConfigError("fixed strategy has the wrong length");
  if (!problem.upper_shape.contains(upper)) throw ConfigError("fixed strategy lies outside the variable bounds");

  evo::EAParams ll = config.ll;
  ll.sense = problem.lower_sense;
  ScenarioReport best;
  double best_obj = 0.0;
  double best_cv = 0.0;
  bool have = false;
  for (std::size_t i = 0; i < std::max<std::size_t>(restarts, 1); ++i) {
    evo::Rng rng(config.seed + i);
    const auto res = nested::lower_solve(problem, upper, std::nullopt, ll, rng, config.solver);
    best.ll_fe += res.evaluations;
    if (!have || evo::compare_deb(res.objective, res.cv, best_obj, best_cv, problem.lower_sense) ==
                     evo::Preference::first) {
      best.lower = res.genome;
      best_obj = res.objective;
      best_cv = res.cv;
      have = true;
    }
  }
  best.upper = upper;
  best.solution = market::describe(config.market, upper, best.lower);
  best.feasible = nested::evaluate_pair(problem, upper, best.lower).effective_cv() <= 0.0;
  return best;
}

evo::Genome scaled_strategy(const market::MarketConfig& m, const evo::Genome& optimum, double scale, bool* clamped) {
  if (m.spending != market::Spending::at_limit)
    throw ConfigError("scaled scenarios need at_limit spending (budgets at their limits)");
  evo::Genome g = optimum;
  bool clipped = false;
  for (auto& q : g.ints) {
    const auto scaled = static_cast<std::int64_t>(std::llround(static_cast<double>(q) * scale));
    q = m.q_bounds.clamp(scaled);
    clipped = clipped || q != scaled;
  }
  if (clamped) *clamped = clipped;
  return g;
}

ScenarioResult cmd_scenario(const ExperimentConfig& config, const Log& log) {
  config.validate();
  if (config.kind != ProblemKind::market) throw ConfigError("scenario needs a market preset");
  ensure_writable_dir(config.out);
  ScenarioResult out;
  if (!config.scenario_q.empty()) {
    if (config.market.spending != market::Spending::at_limit)
      throw ConfigError("scenario.q needs at_limit spending");
    evo::Genome fixed;
    fixed.ints = config.scenario_q;
    out.scenario = solve_scenario(config, fixed);
  } else {
    const CampaignSummary s = run_campaign(config, log);
    const auto& opt = s.best().best;
    out.reference = solve_scenario(config, opt.upper);
    out.scenario = solve_scenario(config, scaled_strategy(config.market, opt.upper, config.scenario_scale, &out.clamped));
  }

  auto report_json = [](const ScenarioReport& r) {
    return Json{{"upper", genome_to_json(r.upper)},
                {"lower", genome_to_json(r.lower)},
                {"feasible", r.feasible},
                {"ll_fe", r.ll_fe},
                {"market", market_solution_to_json(r.solution)}};
  };
  Json j{{"kind", "scenario"},
         {"config", to_json(config)},
         {"scale", config.scenario_q.empty() ? Json(config.scenario_scale) : Json(nullptr)},
         {"clamped", out.clamped},
         {"scenario", report_json(out.scenario)}};
  std::vector<CsvRow> rows = market_series_rows(out.scenario.solution, {"scenario"});
  if (out.reference) {
    j["reference"] = report_json(*out.reference);
    j["leader_net_change"] = out.scenario.solution.leader.total_net - out.reference->solution.leader.total_net;
    j["follower_net_change"] = out.scenario.solution.follower.total_net - out.reference->solution.follower.total_net;
    for (auto& r : market_series_rows(out.reference->solution, {"reference"})) rows.push_back(std::move(r));
  }
  write_json(config.out / "scenario.json", j);
  write_csv(config.out / "scenario_series.csv", market_series_header({"case"}), rows);
  return out;
}

// ---- verify --------------------------------------------------------------

std::size_t verify_cost(const ExperimentConfig& config) {
  const auto problem = config.problem();
  const auto ul = window(midpoint(problem.upper_shape), problem.upper_shape, config.verify_ul_window,
                         config.verify_real_step);
  const auto ll = window(midpoint(problem.lower_shape), problem.lower_shape, config.verify_ll_window,
                         config.verify_real_step);
  const std::size_t ll_points = ll.points();
  const std::size_t ul_points = ul.points();
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  const std::size_t cost = (ll_points == max || ul_points > max / (ll_points + 1)) ? max : ul_points * (ll_points + 1);
  if (cost > config.verify_cap)
    throw ConfigError(fmt::format("verify refused: {} has {} upper and {} lower genes, the oracle grid would need {} "
                                  "evaluations (cap {})",
                                  problem.name, problem.upper_shape.size(), problem.lower_shape.size(),
                                  cost == max ? std::string("more than 1.8e19") : std::to_string(cost),
                                  config.verify_cap));
  return cost;
}

VerifyReport verify_candidate(const ExperimentConfig& config, const nested::Individual& candidate, const Log& log) {
  const auto problem = config.problem();
  const Log say = log ? log : Log([](const std::string&) {});
  const oracle::LowerGridFn ll_grid = [&](const evo::Genome&) {
    return window(candidate.lower, problem.lower_shape, config.verify_ll_window, config.verify_real_step);
  };
  VerifyReport r;
  r.candidate = candidate;
  say(fmt::format("local check, radius {}", config.verify_radius));
  r.local = oracle::verify_local_optimum(problem, candidate, config.verify_radius, ll_grid, config.verify_real_step,
                                         config.verify_cap);
  say(fmt::format("grid search, upper window {}, lower window {}", config.verify_ul_window, config.verify_ll_window));
  r.grid = oracle::bilevel_grid_search(
      problem, window(candidate.upper, problem.upper_shape, config.verify_ul_window, config.verify_real_step), ll_grid,
      config.verify_cap);
  r.grid_matches = r.grid.best.upper.ints == candidate.upper.ints && r.grid.best.lower.ints == candidate.lower.ints;
  const bool grid_better = evo::compare_deb(r.grid.best.upper_obj, r.grid.best.effective_cv(), r.local.reference_obj,
                                            r.local.reference_cv, problem.upper_sense) == evo::Preference::first;
  if (r.local.is_local_optimum() && r.grid_matches)
    r.verdict = "agrees";
  else if (!r.local.is_local_optimum() || grid_better)
    r.verdict = "improvement found";
  else
    r.verdict = "disagrees";
  return r;
}

VerifyReport cmd_verify(const ExperimentConfig& config, const Log& log) {
  config.validate();
  verify_cost(config);
  ensure_writable_dir(config.out);
  const CampaignSummary s = run_campaign(config, log);
  VerifyReport r = verify_candidate(config, s.best().best, log);

  Json improvements = Json::array();
  for (const auto& imp : r.local.improvements)
    improvements.push_back(Json{{"upper", genome_to_json(imp.upper)},
                                {"lower", genome_to_json(imp.lower)},
                                {"upper_obj", imp.upper_obj},
                                {"effective_cv", imp.effective_cv}});
  write_json(config.out / "verify.json",
             Json{{"kind", "verify"},
                  {"config", to_json(config)},
                  {"verdict", r.verdict},
                  {"candidate", individual_to_json(r.candidate)},
                  {"grid_best", individual_to_json(r.grid.best)},
                  {"grid_matches", r.grid_matches},
                  {"local_reference_obj", r.local.reference_obj},
                  {"local_lower_matches", r.local.lower_matches},
                  {"local_probes", r.local.probes},
                  {"improvements", improvements},
                  {"evaluations", r.local.evaluations + r.grid.evaluations},
                  {"edge_hits", r.local.edge_hits + r.grid.edge_hits},
                  {"elite_trace", record_to_json(s.best())["elite_trace"]}});
  write_surface(config.out / "upper_surface.csv", r.grid.upper_surface);
  write_surface(config.out / "lower_surface.csv", r.grid.lower_surface);
  return r;
}

// ---- smd -----------------------------------------------------------------

std::vector<CampaignSummary> cmd_smd(const ExperimentConfig& config, std::vector<int> ids, const Log& log) {
  if (ids.empty()) {
    if (config.kind != ProblemKind::smd) throw ConfigError("smd needs an smdK preset or explicit ids");
    ids.push_back(config.smd_id);
  }
  ensure_writable_dir(config.out);
  std::vector<CampaignSummary> out;
  std::vector<CsvRow> rows;
  for (int id : ids) {
    ExperimentConfig c = config;
    apply_preset(c, fmt::format("smd{}", id));
    c.out = config.out / fmt::format("smd{}_{}v", id, config.vars);
    out.push_back(cmd_run(c, log));
    const auto& s = out.back();
    rows.push_back({fmt::format("SMD{}", id), format_double(s.ll_fe.best), format_double(s.ul_fe.best),
                    format_double(s.ll_fe.median), format_double(s.ul_fe.median), format_double(s.ll_fe.worst),
                    format_double(s.ul_fe.worst), format_double(s.ul_accuracy->median),
                    format_double(s.ll_accuracy->median), format_double(s.ll_calls.median),
                    format_double(s.ll_fe_per_call), std::to_string(s.completed())});
  }
  write_csv(config.out / "smd_table.csv",
            {"problem", "best_ll_fe", "best_ul_fe", "median_ll_fe", "median_ul_fe", "worst_ll_fe", "worst_ul_fe",
             "median_ul_accuracy", "median_ll_accuracy", "median_ll_calls", "ll_fe_per_ll_call", "completed"},
            rows);
  return out;
}

}  // namespace bilevel::bench
