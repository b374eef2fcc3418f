#include "bilevel/bench/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "bilevel/errors.hpp"
#include "bilevel/smd/smd.hpp"

namespace bilevel::bench {

namespace {

using Setter = std::function<void(ExperimentConfig&, const Json&)>;

template <class T>
T get(const Json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const Json& v, const std::string& key) {
  const auto n = get<std::int64_t>(v, key);
  if (n < 0) throw ConfigError("config key '" + key + "' must be non-negative");
  return static_cast<std::size_t>(n);
}

void add_level(std::map<std::string, Setter>& m, const std::string& prefix,
               evo::EAParams ExperimentConfig::*level) {
  auto k = [prefix](const char* name) { return prefix + "." + name; };
  m[k("mu")] = [=](auto& c, const Json& v) { (c.*level).mu = get_count(v, k("mu")); };
  m[k("lambda")] = [=](auto& c, const Json& v) { (c.*level).lambda = get_count(v, k("lambda")); };
  m[k("r")] = [=](auto& c, const Json& v) { (c.*level).r = get_count(v, k("r")); };
  m[k("pop_size")] = [=](auto& c, const Json& v) { (c.*level).pop_size = get_count(v, k("pop_size")); };
  m[k("p_crossover")] = [=](auto& c, const Json& v) { (c.*level).p_crossover = get<double>(v, k("p_crossover")); };
  m[k("p_mutation")] = [=](auto& c, const Json& v) { (c.*level).p_mutation = get<double>(v, k("p_mutation")); };
  m[k("omega_xi")] = [=](auto& c, const Json& v) { (c.*level).omega_xi = get<double>(v, k("omega_xi")); };
  m[k("sigma_eta")] = [=](auto& c, const Json& v) { (c.*level).sigma_eta = get<double>(v, k("sigma_eta")); };
  m[k("eta_stop")] = [=](auto& c, const Json& v) { (c.*level).eta_stop = get<double>(v, k("eta_stop")); };
  m[k("pcx_mode")] = [=](auto& c, const Json& v) {
    (c.*level).pcx_mode = evo::parse_pcx_mode(get<std::string>(v, k("pcx_mode")));
  };
  m[k("distribution_index")] = [=](auto& c, const Json& v) {
    (c.*level).mutation_distribution_index = get<double>(v, k("distribution_index"));
  };
  m[k("max_generations")] = [=](auto& c, const Json& v) {
    (c.*level).max_generations = get_count(v, k("max_generations"));
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    m["runs"] = [](auto& c, const Json& v) { c.runs = get<int>(v, "runs"); };
    m["seed"] = [](auto& c, const Json& v) { c.seed = get<std::uint64_t>(v, "seed"); };
    m["out"] = [](auto& c, const Json& v) { c.out = get<std::string>(v, "out"); };
    m["jobs"] = [](auto& c, const Json& v) { c.jobs = get<int>(v, "jobs"); };
    m["fast"] = [](auto& c, const Json& v) { c.fast = get<bool>(v, "fast"); };
    m["vars"] = [](auto& c, const Json& v) { c.vars = get_count(v, "vars"); };

    m["market.leaders"] = [](auto& c, const Json& v) { c.market.leaders = get<int>(v, "market.leaders"); };
    m["market.followers"] = [](auto& c, const Json& v) { c.market.followers = get<int>(v, "market.followers"); };
    m["market.periods"] = [](auto& c, const Json& v) { c.market.periods = get<int>(v, "market.periods"); };
    m["market.alpha_l"] = [](auto& c, const Json& v) { c.market.alpha_l = get<double>(v, "market.alpha_l"); };
    m["market.beta_l"] = [](auto& c, const Json& v) { c.market.beta_l = get<double>(v, "market.beta_l"); };
    m["market.alpha_f"] = [](auto& c, const Json& v) { c.market.alpha_f = get<double>(v, "market.alpha_f"); };
    m["market.beta_f"] = [](auto& c, const Json& v) { c.market.beta_f = get<double>(v, "market.beta_f"); };
    m["market.q_min"] = [](auto& c, const Json& v) { c.market.q_bounds.lo = get<std::int64_t>(v, "market.q_min"); };
    m["market.q_max"] = [](auto& c, const Json& v) { c.market.q_bounds.hi = get<std::int64_t>(v, "market.q_max"); };
    m["market.money_min"] = [](auto& c, const Json& v) {
      c.market.money_bounds.lo = get<double>(v, "market.money_min");
    };
    m["market.money_max"] = [](auto& c, const Json& v) {
      c.market.money_bounds.hi = get<double>(v, "market.money_max");
    };
    m["market.spending"] = [](auto& c, const Json& v) {
      c.market.spending = market::parse_spending(get<std::string>(v, "market.spending"));
    };

    add_level(m, "ul", &ExperimentConfig::ul);
    add_level(m, "ll", &ExperimentConfig::ll);
    m["ul.local_search"] = [](auto& c, const Json& v) {
      c.solver.upper_local_search_budget = get_count(v, "ul.local_search");
    };
    m["ll.local_search"] = [](auto& c, const Json& v) {
      c.solver.lower_local_search_budget = get_count(v, "ll.local_search");
    };

    m["sweep.leaders_min"] = [](auto& c, const Json& v) { c.sweep_leaders.lo = get<int>(v, "sweep.leaders_min"); };
    m["sweep.leaders_max"] = [](auto& c, const Json& v) { c.sweep_leaders.hi = get<int>(v, "sweep.leaders_max"); };
    m["sweep.followers_min"] = [](auto& c, const Json& v) {
      c.sweep_followers.lo = get<int>(v, "sweep.followers_min");
    };
    m["sweep.followers_max"] = [](auto& c, const Json& v) {
      c.sweep_followers.hi = get<int>(v, "sweep.followers_max");
    };

    m["verify.radius"] = [](auto& c, const Json& v) { c.verify_radius = get<std::int64_t>(v, "verify.radius"); };
    m["verify.ul_window"] = [](auto& c, const Json& v) {
      c.verify_ul_window = get<std::int64_t>(v, "verify.ul_window");
    };
    m["verify.ll_window"] = [](auto& c, const Json& v) {
      c.verify_ll_window = get<std::int64_t>(v, "verify.ll_window");
    };
    m["verify.real_step"] = [](auto& c, const Json& v) { c.verify_real_step = get<double>(v, "verify.real_step"); };
    m["verify.cap"] = [](auto& c, const Json& v) { c.verify_cap = get_count(v, "verify.cap"); };

    m["scenario.q"] = [](auto& c, const Json& v) { c.scenario_q = get<std::vector<std::int64_t>>(v, "scenario.q"); };
    m["scenario.scale"] = [](auto& c, const Json& v) { c.scenario_scale = get<double>(v, "scenario.scale"); };
    return m;
  }();
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  ul.validate();
  ll.validate();
  if (kind == ProblemKind::market) market.validate();
  if (kind == ProblemKind::smd && (smd_id < 1 || smd_id > 6)) throw ConfigError("SMD id must be 1..6");
  for (const Range& r : {sweep_leaders, sweep_followers})
    if (r.lo < 1 || r.lo > r.hi) throw ConfigError("invalid sweep range");
  if (verify_radius < 0 || verify_ul_window < 0 || verify_ll_window < 0)
    throw ConfigError("verify windows must be non-negative");
  if (!(scenario_scale >= 0.0)) throw ConfigError("scenario.scale must be non-negative");
}

nested::BilevelProblem ExperimentConfig::problem() const {
  if (kind == ProblemKind::smd) return smd::make_smd(smd_id, vars).problem;
  return market::make_problem(market);
}

void apply_preset(ExperimentConfig& c, const std::string& name) {
  if (name == "market-1l1f-2p") {
    c.kind = ProblemKind::market;
    c.market = market::MarketConfig::two_period_duopoly();
  } else if (name == "market-2l5f") {
    c.kind = ProblemKind::market;
    c.market = market::MarketConfig::five_period(2, 5);
  } else if (name.size() == 4 && name.starts_with("smd") && name[3] >= '1' && name[3] <= '6') {
    c.kind = ProblemKind::smd;
    c.smd_id = name[3] - '0';
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected market-2l5f, market-1l1f-2p or smd1..smd6)");
  }
  c.preset = name;
}

void apply_json(ExperimentConfig& c, const Json& flat) {
  if (!flat.is_object()) throw ConfigError("config must be a JSON object of flat keys");
  if (auto it = flat.find("preset"); it != flat.end()) apply_preset(c, get<std::string>(*it, "preset"));
  const auto& table = setters();
  for (const auto& [key, value] : flat.items()) {
    if (key == "preset") continue;
    auto s = table.find(key);
    if (s == table.end()) throw ConfigError("unknown config key '" + key + "'");
    s->second(c, value);
  }
}

void apply_fast(ExperimentConfig& c) {
  c.fast = true;
  c.runs = 5;
  c.ul.pop_size = 40;
  c.ll.pop_size = 40;
}

ExperimentConfig load_config(const std::filesystem::path& file, ExperimentConfig base) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  Json flat;
  try {
    flat = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file " + file.string() + ": " + e.what());
  }
  apply_json(base, flat);
  if (base.fast) {
    apply_fast(base);
    // Explicit keys still win over the profile.
    apply_json(base, flat);
  }
  return base;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["preset"] = c.preset;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["out"] = c.out.string();
  j["jobs"] = c.jobs;
  j["fast"] = c.fast;
  j["vars"] = c.vars;
  j["market.leaders"] = c.market.leaders;
  j["market.followers"] = c.market.followers;
  j["market.periods"] = c.market.periods;
  j["market.alpha_l"] = c.market.alpha_l;
  j["market.beta_l"] = c.market.beta_l;
  j["market.alpha_f"] = c.market.alpha_f;
  j["market.beta_f"] = c.market.beta_f;
  j["market.q_min"] = c.market.q_bounds.lo;
  j["market.q_max"] = c.market.q_bounds.hi;
  j["market.money_min"] = c.market.money_bounds.lo;
  j["market.money_max"] = c.market.money_bounds.hi;
  j["market.spending"] = std::string(market::to_string(c.market.spending));
  for (const auto& [prefix, p] : {std::pair{"ul", &c.ul}, std::pair{"ll", &c.ll}}) {
    const std::string k = prefix;
    j[k + ".mu"] = p->mu;
    j[k + ".lambda"] = p->lambda;
    j[k + ".r"] = p->r;
    j[k + ".pop_size"] = p->pop_size;
    j[k + ".p_crossover"] = p->p_crossover;
    j[k + ".p_mutation"] = p->p_mutation;
    j[k + ".omega_xi"] = p->omega_xi;
    j[k + ".sigma_eta"] = p->sigma_eta;
    j[k + ".eta_stop"] = p->eta_stop;
    j[k + ".pcx_mode"] = std::string(evo::to_string(p->pcx_mode));
    j[k + ".distribution_index"] = p->mutation_distribution_index;
    j[k + ".max_generations"] = p->max_generations;
  }
  j["ul.local_search"] = c.solver.upper_local_search_budget;
  j["ll.local_search"] = c.solver.lower_local_search_budget;
  j["sweep.leaders_min"] = c.sweep_leaders.lo;
  j["sweep.leaders_max"] = c.sweep_leaders.hi;
  j["sweep.followers_min"] = c.sweep_followers.lo;
  j["sweep.followers_max"] = c.sweep_followers.hi;
  j["verify.radius"] = c.verify_radius;
  j["verify.ul_window"] = c.verify_ul_window;
  j["verify.ll_window"] = c.verify_ll_window;
  j["verify.real_step"] = c.verify_real_step;
  j["verify.cap"] = c.verify_cap;
  j["scenario.q"] = c.scenario_q;
  j["scenario.scale"] = c.scenario_scale;
  return j;
}

}  // namespace bilevel::bench
