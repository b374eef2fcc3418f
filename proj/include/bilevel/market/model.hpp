#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bilevel/evo/genome.hpp"
#include "bilevel/nested/problem.hpp"

namespace bilevel::market {

/// How investment and marketing for periods 2..T are chosen.
///  - at_limit: derived, I(t+1) = alpha * max(0, gross(t)), M(t+1) likewise with beta.
///    The genome holds only the T production levels.
///  - free: I and M are real genes bounded by `money_bounds`, and the budget
///    limits are inequality constraints.
enum class Spending { at_limit, free };

enum class Side { leader, follower };

struct MarketConfig {
  int leaders = 1;
  int followers = 1;
  int periods = 2;
  double alpha_l = 0.2;
  double beta_l = 0.1;
  double alpha_f = 0.2;
  double beta_f = 0.1;
  evo::IntBound q_bounds{0, 1000};
  evo::RealBound money_bounds{0.0, 5000.0};
  Spending spending = Spending::at_limit;

  double alpha(Side s) const { return s == Side::leader ? alpha_l : alpha_f; }
  double beta(Side s) const { return s == Side::leader ? beta_l : beta_f; }
  int count(Side s) const { return s == Side::leader ? leaders : followers; }

  void validate() const;

  /// Single leader, single follower, two periods.
  static MarketConfig two_period_duopoly();
  /// Five periods with the given group sizes (2 leaders, 5 followers by default).
  static MarketConfig five_period(int leaders = 2, int followers = 5);
};

std::string_view to_string(Spending s);
Spending parse_spending(std::string_view s);

/// One firm's decisions. `inv[k]` and `mkt[k]` belong to period k + 2; the
/// first period never spends.
struct FirmStrategy {
  std::vector<std::int64_t> q;
  std::vector<double> inv;
  std::vector<double> mkt;
};

struct PeriodOutcome {
  double price = 0.0;
  double cost = 0.0;
  double revenue = 0.0;
  double gross = 0.0;  // revenue - cost
  double investment = 0.0;
  double marketing = 0.0;
  double net = 0.0;  // gross - investment - marketing
};

struct FirmOutcome {
  FirmStrategy strategy;  // with spending resolved
  std::vector<PeriodOutcome> periods;
  double total_net = 0.0;
  double total_gross = 0.0;
  std::int64_t total_q = 0;
};

/// Inverse demand seen by a firm with cumulative marketing `own_cum_mkt` when
/// the whole market supplies `total_q` units.
double price(double own_cum_mkt, double total_q);

/// Production cost of `q` units after cumulative investment `own_cum_inv`.
double cost(double q, double own_cum_inv);

/// Outcome of period `t` (0-based). The cumulative sums include the period's
/// own spending.
PeriodOutcome firm_period_outcome(const FirmStrategy& own, std::size_t t, double total_q_t,
                                  double own_cum_inv, double own_cum_mkt);

/// Plays one firm through all periods against the given market totals.
/// In at_limit mode the strategy's spending is overwritten period by period.
FirmOutcome simulate_firm(const FirmStrategy& own, std::span<const double> total_q, double alpha,
                          double beta, Spending spending);

/// Budget constraints g <= 0, two per period transition:
/// inv(t+1) - alpha * gross(t), then mkt(t+1) - beta * gross(t).
std::vector<double> constraints(const MarketConfig& config, Side side, const FirmStrategy& s,
                                std::span<const PeriodOutcome> outcomes);

/// Bounds of one firm's genome: T integer productions, plus 2(T-1) real
/// spending genes (investments first) in free mode.
evo::GenomeShape firm_shape(const MarketConfig& config);
FirmStrategy decode_strategy(const evo::Genome& g, const MarketConfig& config);
evo::Genome encode_strategy(const FirmStrategy& s, const MarketConfig& config);

/// Symmetric reduction: the upper genome is one representative leader, the
/// lower genome one representative follower. Objectives are the group sums.
nested::BilevelProblem make_problem(const MarketConfig& config);

/// Period totals N * q_leader + M * q_follower.
std::vector<double> period_totals(const MarketConfig& config, const FirmStrategy& leader,
                                  const FirmStrategy& follower);

/// Both representative firms evaluated at a solution of the reduced problem.
struct MarketSolution {
  FirmOutcome leader;
  FirmOutcome follower;
  double upper_objective = 0.0;  // N * leader net
  double lower_objective = 0.0;  // M * follower net
  double total_gross = 0.0;      // sum of all players' gross profit
  double total_production = 0.0;
};

MarketSolution describe(const MarketConfig& config, const evo::Genome& upper, const evo::Genome& lower);

/// Non-reduced evaluation with one strategy per firm. Per-firm outcomes come
/// back in input order.
struct FullMarketOutcome {
  std::vector<FirmOutcome> leaders;
  std::vector<FirmOutcome> followers;
};

FullMarketOutcome evaluate_full(const MarketConfig& config, std::span<const FirmStrategy> leaders,
                                std::span<const FirmStrategy> followers);

}  // namespace bilevel::market
