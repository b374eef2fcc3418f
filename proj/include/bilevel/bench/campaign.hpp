#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bilevel/bench/config.hpp"
#include "bilevel/bench/stats.hpp"
#include "bilevel/market/model.hpp"
#include "bilevel/nested/solver.hpp"
#include "bilevel/oracle/grid.hpp"

namespace bilevel::bench {

/// Progress messages; the default sink discards them.
using Log = std::function<void(const std::string&)>;

/// Runs `task(i)` for i in [0, n) on up to `jobs` threads. The first exception
/// thrown by a task is re-thrown after all threads finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task);

struct RunOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::optional<nested::RunRecord> record;
  std::string error;  // set when the run failed

  bool ok() const { return record.has_value(); }
};

struct CampaignSummary {
  std::string problem;
  std::vector<RunOutcome> runs;
  std::optional<std::size_t> best_run;  // index into `runs`
  Spread ul_fe;
  Spread ll_fe;
  Spread ll_calls;
  double ll_fe_per_call = 0.0;  // median over completed runs
  std::optional<Spread> ul_accuracy;
  std::optional<Spread> ll_accuracy;
  std::optional<market::MarketSolution> market;  // at the best run

  std::size_t completed() const;
  std::vector<std::size_t> failed() const;
  const nested::RunRecord& best() const;
};

/// Runs `config.runs` solves with seeds seed + i. Nothing is written.
CampaignSummary run_campaign(const ExperimentConfig& config, const Log& log = {});

/// Index of the preferred record (Deb rules on the upper objective).
std::optional<std::size_t> best_run_index(const std::vector<RunOutcome>& runs, evo::Sense upper_sense);

/// run_campaign, then one record file per run, summary.json and, for market
/// problems, series.csv in config.out.
CampaignSummary cmd_run(const ExperimentConfig& config, const Log& log = {});

Json summary_to_json(const CampaignSummary& s, const ExperimentConfig& config);

// ---- sweep ---------------------------------------------------------------

struct SweepCell {
  int leaders = 0;
  int followers = 0;
  bool ok = false;
  std::string error;
  std::size_t completed_runs = 0;
  double total_gross = 0.0;
  double total_production = 0.0;
  market::MarketSolution solution;
  nested::Individual best;
};

struct SweepResult {
  std::vector<SweepCell> cells;

  const SweepCell* find(int leaders, int followers) const;
};

/// Solves every (N, M) pair (the config's sweep ranges when `cells` is empty)
/// with config.runs runs each, keeping the best run per cell.
SweepResult run_sweep(const ExperimentConfig& config, std::vector<std::pair<int, int>> cells = {},
                      const Log& log = {});

/// Checks the sweep against the expected market shape. Returns one message per
/// violation: a follower out-producing or out-earning a leader in some period,
/// individual production or gross profit rising with N or M, or total
/// production not increasing in N or M.
std::vector<std::string> sweep_property_violations(const SweepResult& sweep, double tolerance = 1e-9);

/// run_sweep, then gross.csv, production.csv (leaders by row, followers by
/// column), sweep_series.csv and sweep.json in config.out.
SweepResult cmd_sweep(const ExperimentConfig& config, const Log& log = {});

// ---- scenario ------------------------------------------------------------

struct ScenarioReport {
  evo::Genome upper;
  evo::Genome lower;
  market::MarketSolution solution;
  bool feasible = false;
  std::size_t ll_fe = 0;
};

/// Holds the leaders' genome fixed and searches the followers' best response
/// with `restarts` seeded lower-level solves.
ScenarioReport solve_scenario(const ExperimentConfig& config, const evo::Genome& upper, std::size_t restarts = 5);

struct ScenarioResult {
  std::optional<ScenarioReport> reference;  // the solver's optimum, re-solved the same way
  ScenarioReport scenario;
  bool clamped = false;  // scaled productions were clipped to the bounds
};

/// Leader productions scaled about a reference optimum, in at_limit spending.
evo::Genome scaled_strategy(const market::MarketConfig& m, const evo::Genome& optimum, double scale, bool* clamped);

/// With scenario.q set, plays that fixed strategy. Otherwise runs a campaign,
/// scales the best leader strategy by scenario.scale and plays it. Writes
/// scenario.json and scenario_series.csv in config.out.
ScenarioResult cmd_scenario(const ExperimentConfig& config, const Log& log = {});

// ---- verify --------------------------------------------------------------

struct VerifyReport {
  nested::Individual candidate;
  oracle::LocalOptimumReport local;
  oracle::GridSearchResult grid;
  bool grid_matches = false;  // grid optimum equals the candidate on integer genes
  std::string verdict;        // "agrees", "improvement found" or "disagrees"
};

/// Estimated oracle cost for the config's problem; throws ConfigError when it
/// is above config.verify_cap.
std::size_t verify_cost(const ExperimentConfig& config);

/// Grid checks around a given candidate.
VerifyReport verify_candidate(const ExperimentConfig& config, const nested::Individual& candidate, const Log& log = {});

/// Refuses oversize problems, runs a campaign, then checks its best run.
/// Writes verify.json and the two surfaces in config.out.
VerifyReport cmd_verify(const ExperimentConfig& config, const Log& log = {});

// ---- smd -----------------------------------------------------------------

/// Campaign on each SMD id in `ids` (the preset's id when empty) with
/// config.vars variables. Each campaign goes to config.out/smd<K>_<n>v and a
/// combined smd_table.csv is written in config.out.
std::vector<CampaignSummary> cmd_smd(const ExperimentConfig& config, std::vector<int> ids = {}, const Log& log = {});

}  // namespace bilevel::bench
