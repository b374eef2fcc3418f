#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilevel/evo/params.hpp"
#include "bilevel/market/model.hpp"
#include "bilevel/nested/problem.hpp"
#include "bilevel/nested/solver.hpp"

namespace bilevel::bench {

using Json = nlohmann::json;

enum class ProblemKind { market, smd };

struct Range {
  int lo = 1;
  int hi = 5;
};

struct ExperimentConfig {
  std::string preset = "market-1l1f-2p";
  ProblemKind kind = ProblemKind::market;
  market::MarketConfig market = market::MarketConfig::two_period_duopoly();
  int smd_id = 1;
  std::size_t vars = 10;

  evo::EAParams ul;
  evo::EAParams ll;
  nested::SolverOptions solver;

  int runs = 31;
  std::uint64_t seed = 1000;
  std::filesystem::path out = "results";
  int jobs = 1;
  bool fast = false;

  Range sweep_leaders;
  Range sweep_followers;

  // Oracle windows for verify: upper and lower integer half-widths.
  std::int64_t verify_radius = 3;
  std::int64_t verify_ul_window = 30;
  std::int64_t verify_ll_window = 40;
  double verify_real_step = 1.0;
  std::size_t verify_cap = 100'000'000;

  // Scenario: explicit leader productions, or a scale applied to a reference optimum.
  std::vector<std::int64_t> scenario_q;
  double scenario_scale = 1.0;

  void validate() const;
  nested::BilevelProblem problem() const;
};

/// Resets the problem fields to a named preset: market-1l1f-2p, market-2l5f,
/// or smd1..smd6.
void apply_preset(ExperimentConfig& c, const std::string& name);

/// Applies flat keys ("runs", "market.leaders", "ul.pop_size", ...). "preset"
/// is applied first so that the remaining keys override it. Unknown keys throw.
void apply_json(ExperimentConfig& c, const Json& flat);

/// Reduced-cost profile: 5 runs and smaller populations.
void apply_fast(ExperimentConfig& c);

/// Applies the file's keys on top of `base`, then the fast profile when the
/// file sets "fast".
ExperimentConfig load_config(const std::filesystem::path& file, ExperimentConfig base = {});
Json to_json(const ExperimentConfig& c);

}  // namespace bilevel::bench
