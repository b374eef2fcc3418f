#include "bilevel/market/model.hpp"

#include <algorithm>
#include <cmath>

#include "bilevel/errors.hpp"

namespace bilevel::market {

namespace {

std::size_t spending_slots(const MarketConfig& c) { return static_cast<std::size_t>(c.periods - 1); }

// Spending for period t + 1 (0-based t) given period t's gross profit.
double at_limit(double fraction, double gross) { return fraction * std::max(0.0, gross); }

}  // namespace

void MarketConfig::validate() const {
  if (leaders < 1 || followers < 1) throw ConfigError("market needs at least one leader and one follower");
  if (periods < 1) throw ConfigError("market needs at least one period");
  for (double f : {alpha_l, beta_l, alpha_f, beta_f})
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("budget fractions must lie in [0, 1]");
  if (alpha_l + beta_l > 1.0 || alpha_f + beta_f > 1.0)
    throw ConfigError("investment plus marketing fractions must not exceed 1");
  if (q_bounds.lo < 0 || q_bounds.lo > q_bounds.hi) throw ConfigError("invalid production bounds");
  if (!(money_bounds.lo >= 0.0) || !(money_bounds.lo <= money_bounds.hi))
    throw ConfigError("invalid money bounds");
}

MarketConfig MarketConfig::two_period_duopoly() {
  MarketConfig c;
  c.leaders = 1;
  c.followers = 1;
  c.periods = 2;
  c.money_bounds = {0.0, 5000.0};
  return c;
}

MarketConfig MarketConfig::five_period(int leaders, int followers) {
  MarketConfig c;
  c.leaders = leaders;
  c.followers = followers;
  c.periods = 5;
  c.money_bounds = {0.0, 1000.0};
  return c;
}

std::string_view to_string(Spending s) { return s == Spending::at_limit ? "at_limit" : "free"; }

Spending parse_spending(std::string_view s) {
  if (s == "at_limit") return Spending::at_limit;
  if (s == "free") return Spending::free;
  throw ConfigError("unknown spending mode '" + std::string(s) + "'");
}

double price(double own_cum_mkt, double total_q) {
  return 100.0 * std::pow(1.0 + 10.0 * own_cum_mkt, 0.02) / std::sqrt(1.0 + 0.01 * total_q);
}

double cost(double q, double own_cum_inv) {
  return (0.025 * q * q + 0.02 * q + 200.0 + 400.0 * std::log1p(q)) / std::exp(own_cum_inv / 10000.0);
}

PeriodOutcome firm_period_outcome(const FirmStrategy& own, std::size_t t, double total_q_t,
                                  double own_cum_inv, double own_cum_mkt) {
  PeriodOutcome o;
  const auto q = static_cast<double>(own.q.at(t));
  o.price = price(own_cum_mkt, total_q_t);
  o.cost = cost(q, own_cum_inv);
  o.revenue = o.price * q;
  o.gross = o.revenue - o.cost;
  if (t > 0) {
    o.investment = own.inv.at(t - 1);
    o.marketing = own.mkt.at(t - 1);
  }
  o.net = o.gross - o.investment - o.marketing;
  return o;
}

FirmOutcome simulate_firm(const FirmStrategy& own, std::span<const double> total_q, double alpha,
                          double beta, Spending spending) {
  const std::size_t periods = own.q.size();
  if (total_q.size() != periods) throw ContractViolation("simulate_firm: period count mismatch");
  FirmOutcome out;
  out.strategy = own;
  out.strategy.inv.resize(periods > 0 ? periods - 1 : 0, 0.0);
  out.strategy.mkt.resize(periods > 0 ? periods - 1 : 0, 0.0);
  out.periods.reserve(periods);

  double cum_inv = 0.0;
  double cum_mkt = 0.0;
  for (std::size_t t = 0; t < periods; ++t) {
    if (t > 0) {
      if (spending == Spending::at_limit) {
        const double prev_gross = out.periods[t - 1].gross;
        out.strategy.inv[t - 1] = at_limit(alpha, prev_gross);
        out.strategy.mkt[t - 1] = at_limit(beta, prev_gross);
      }
      cum_inv += out.strategy.inv[t - 1];
      cum_mkt += out.strategy.mkt[t - 1];
    }
    const PeriodOutcome o = firm_period_outcome(out.strategy, t, total_q[t], cum_inv, cum_mkt);
    out.total_net += o.net;
    out.total_gross += o.gross;
    out.total_q += out.strategy.q[t];
    out.periods.push_back(o);
  }
  return out;
}

std::vector<double> constraints(const MarketConfig& config, Side side, const FirmStrategy& s,
                                std::span<const PeriodOutcome> outcomes) {
  const double alpha = config.alpha(side);
  const double beta = config.beta(side);
  std::vector<double> g;
  const std::size_t transitions = spending_slots(config);
  g.reserve(2 * transitions);
  for (std::size_t t = 0; t < transitions; ++t) {
    const double gross = outcomes[t].gross;
    g.push_back(s.inv[t] - alpha * gross);
    g.push_back(s.mkt[t] - beta * gross);
  }
  return g;
}

evo::GenomeShape firm_shape(const MarketConfig& config) {
  evo::GenomeShape shape;
  shape.ints.assign(static_cast<std::size_t>(config.periods), config.q_bounds);
  if (config.spending == Spending::free)
    shape.reals.assign(2 * spending_slots(config), config.money_bounds);
  return shape;
}

FirmStrategy decode_strategy(const evo::Genome& g, const MarketConfig& config) {
  const auto periods = static_cast<std::size_t>(config.periods);
  const std::size_t slots = spending_slots(config);
  if (g.ints.size() != periods) throw ContractViolation("market genome: wrong number of production genes");
  FirmStrategy s;
  s.q = g.ints;
  if (config.spending == Spending::free) {
    if (g.reals.size() != 2 * slots) throw ContractViolation("market genome: wrong number of spending genes");
    s.inv.assign(g.reals.begin(), g.reals.begin() + static_cast<std::ptrdiff_t>(slots));
    s.mkt.assign(g.reals.begin() + static_cast<std::ptrdiff_t>(slots), g.reals.end());
  } else {
    s.inv.assign(slots, 0.0);
    s.mkt.assign(slots, 0.0);
  }
  return s;
}

evo::Genome encode_strategy(const FirmStrategy& s, const MarketConfig& config) {
  evo::Genome g;
  g.ints = s.q;
  if (config.spending == Spending::free) {
    g.reals = s.inv;
    g.reals.insert(g.reals.end(), s.mkt.begin(), s.mkt.end());
  }
  return g;
}

std::vector<double> period_totals(const MarketConfig& config, const FirmStrategy& leader,
                                  const FirmStrategy& follower) {
  std::vector<double> totals(static_cast<std::size_t>(config.periods));
  for (std::size_t t = 0; t < totals.size(); ++t)
    totals[t] = config.leaders * static_cast<double>(leader.q[t]) +
                config.followers * static_cast<double>(follower.q[t]);
  return totals;
}

nested::BilevelProblem make_problem(const MarketConfig& config) {
  config.validate();
  nested::BilevelProblem p;
  p.name = "market-" + std::to_string(config.leaders) + "l" + std::to_string(config.followers) + "f-" +
           std::to_string(config.periods) + "p";
  p.upper_shape = firm_shape(config);
  p.lower_shape = firm_shape(config);
  p.upper_sense = evo::Sense::maximize;
  p.lower_sense = evo::Sense::maximize;

  // Spending derived from the previous period: no strategy objects needed.
  // Same arithmetic, in the same order, as simulate_firm.
  auto limit_eval = [config](Side side) {
    return [config, side](const evo::Genome& upper, const evo::Genome& lower) {
      const auto periods = static_cast<std::size_t>(config.periods);
      if (upper.ints.size() != periods || lower.ints.size() != periods)
        throw ContractViolation("market genome: wrong number of production genes");
      const auto& own = side == Side::leader ? upper.ints : lower.ints;
      const double alpha = config.alpha(side);
      const double beta = config.beta(side);
      nested::LevelEvaluation e;
      e.constraints.resize(2 * spending_slots(config));
      double cum_inv = 0.0, cum_mkt = 0.0, prev_gross = 0.0, total_net = 0.0;
      for (std::size_t t = 0; t < periods; ++t) {
        double inv = 0.0, mkt = 0.0;
        if (t > 0) {
          inv = at_limit(alpha, prev_gross);
          mkt = at_limit(beta, prev_gross);
          cum_inv += inv;
          cum_mkt += mkt;
          e.constraints[2 * (t - 1)] = inv - alpha * prev_gross;
          e.constraints[2 * (t - 1) + 1] = mkt - beta * prev_gross;
        }
        const double total = config.leaders * static_cast<double>(upper.ints[t]) +
                             config.followers * static_cast<double>(lower.ints[t]);
        const auto q = static_cast<double>(own[t]);
        const double gross = price(cum_mkt, total) * q - cost(q, cum_inv);
        total_net += gross - inv - mkt;
        prev_gross = gross;
      }
      e.objective = config.count(side) * total_net;
      return e;
    };
  };
  if (config.spending == Spending::at_limit) {
    p.upper_eval = limit_eval(Side::leader);
    p.lower_eval = limit_eval(Side::follower);
    return p;
  }

  auto side_eval = [config](Side side) {
    return [config, side](const evo::Genome& upper, const evo::Genome& lower) {
      const FirmStrategy leader = decode_strategy(upper, config);
      const FirmStrategy follower = decode_strategy(lower, config);
      const auto totals = period_totals(config, leader, follower);
      const FirmStrategy& own = side == Side::leader ? leader : follower;
      const FirmOutcome o =
          simulate_firm(own, totals, config.alpha(side), config.beta(side), config.spending);
      nested::LevelEvaluation e;
      e.objective = config.count(side) * o.total_net;
      e.constraints = constraints(config, side, o.strategy, o.periods);
      return e;
    };
  };
  p.upper_eval = side_eval(Side::leader);
  p.lower_eval = side_eval(Side::follower);
  return p;
}

MarketSolution describe(const MarketConfig& config, const evo::Genome& upper, const evo::Genome& lower) {
  const FirmStrategy leader = decode_strategy(upper, config);
  const FirmStrategy follower = decode_strategy(lower, config);
  const auto totals = period_totals(config, leader, follower);
  MarketSolution s;
  s.leader = simulate_firm(leader, totals, config.alpha_l, config.beta_l, config.spending);
  s.follower = simulate_firm(follower, totals, config.alpha_f, config.beta_f, config.spending);
  s.upper_objective = config.leaders * s.leader.total_net;
  s.lower_objective = config.followers * s.follower.total_net;
  s.total_gross = config.leaders * s.leader.total_gross + config.followers * s.follower.total_gross;
  s.total_production = config.leaders * static_cast<double>(s.leader.total_q) +
                       config.followers * static_cast<double>(s.follower.total_q);
  return s;
}

FullMarketOutcome evaluate_full(const MarketConfig& config, std::span<const FirmStrategy> leaders,
                                std::span<const FirmStrategy> followers) {
  config.validate();
  if (leaders.size() != static_cast<std::size_t>(config.leaders) ||
      followers.size() != static_cast<std::size_t>(config.followers))
    throw ContractViolation("evaluate_full: strategy count does not match the configuration");

  // Period-major pass over every firm; firms are indexed leaders first.
  struct Firm {
    FirmOutcome out;
    double alpha;
    double beta;
    double cum_inv = 0.0;
    double cum_mkt = 0.0;
  };
  std::vector<Firm> firms;
  for (const auto& s : leaders) firms.push_back({FirmOutcome{s, {}, 0, 0, 0}, config.alpha_l, config.beta_l});
  for (const auto& s : followers)
    firms.push_back({FirmOutcome{s, {}, 0, 0, 0}, config.alpha_f, config.beta_f});

  const auto periods = static_cast<std::size_t>(config.periods);
  for (auto& f : firms) {
    if (f.out.strategy.q.size() != periods) throw ContractViolation("evaluate_full: wrong period count");
    f.out.strategy.inv.resize(periods - 1, 0.0);
    f.out.strategy.mkt.resize(periods - 1, 0.0);
  }

  for (std::size_t t = 0; t < periods; ++t) {
    double total = 0.0;
    for (const auto& f : firms) total += static_cast<double>(f.out.strategy.q[t]);
    for (auto& f : firms) {
      auto& s = f.out.strategy;
      double inv = 0.0;
      double mkt = 0.0;
      if (t > 0) {
        if (config.spending == Spending::at_limit) {
          const double g = std::max(0.0, f.out.periods.back().gross);
          s.inv[t - 1] = f.alpha * g;
          s.mkt[t - 1] = f.beta * g;
        }
        inv = s.inv[t - 1];
        mkt = s.mkt[t - 1];
      }
      f.cum_inv += inv;
      f.cum_mkt += mkt;
      const auto q = static_cast<double>(s.q[t]);
      PeriodOutcome o;
      o.price = price(f.cum_mkt, total);
      o.cost = cost(q, f.cum_inv);
      o.revenue = o.price * q;
      o.gross = o.revenue - o.cost;
      o.investment = inv;
      o.marketing = mkt;
      o.net = o.gross - inv - mkt;
      f.out.periods.push_back(o);
      f.out.total_net += o.net;
      f.out.total_gross += o.gross;
      f.out.total_q += s.q[t];
    }
  }

  FullMarketOutcome result;
  for (std::size_t i = 0; i < firms.size(); ++i)
    (i < leaders.size() ? result.leaders : result.followers).push_back(std::move(firms[i].out));
  return result;
}

}  // namespace bilevel::market
