#include "bilevel/bench/records.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "bilevel/errors.hpp"

namespace bilevel::bench {

namespace {

// JSON has no infinities; they travel as strings.
Json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double num_from(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("bad number '" + s + "'");
  }
  return j.get<double>();
}

std::string_view to_string(evo::Termination t) { return t == evo::Termination::eta ? "eta" : "generation_cap"; }

evo::Termination parse_termination(const std::string& s) {
  if (s == "eta") return evo::Termination::eta;
  if (s == "generation_cap") return evo::Termination::generation_cap;
  throw ConfigError("unknown termination '" + s + "'");
}

}  // namespace

Json genome_to_json(const evo::Genome& g) {
  Json reals = Json::array();
  for (double v : g.reals) reals.push_back(num(v));
  return Json{{"reals", reals}, {"ints", g.ints}};
}

evo::Genome genome_from_json(const Json& j) {
  evo::Genome g;
  for (const auto& v : j.at("reals")) g.reals.push_back(num_from(v));
  g.ints = j.at("ints").get<std::vector<std::int64_t>>();
  return g;
}

Json individual_to_json(const nested::Individual& ind) {
  return Json{{"upper", genome_to_json(ind.upper)},   {"lower", genome_to_json(ind.lower)},
              {"upper_obj", num(ind.upper_obj)},      {"upper_cv", num(ind.upper_cv)},
              {"lower_obj", num(ind.lower_obj)},      {"lower_cv", num(ind.lower_cv)}};
}

nested::Individual individual_from_json(const Json& j) {
  return nested::Individual{genome_from_json(j.at("upper")), genome_from_json(j.at("lower")),
                            num_from(j.at("upper_obj")),     num_from(j.at("upper_cv")),
                            num_from(j.at("lower_obj")),     num_from(j.at("lower_cv"))};
}

Json record_to_json(const nested::RunRecord& r) {
  Json eta = Json::array();
  for (const auto& p : r.eta_trace) eta.push_back(Json::array({p.generation, num(p.eta)}));
  Json elite = Json::array();
  for (const auto& p : r.elite_trace)
    elite.push_back(Json::array({p.generation, num(p.upper_obj), num(p.lower_obj)}));
  return Json{{"seed", r.seed},
              {"ul_fe", r.ul_fe},
              {"ll_fe", r.ll_fe},
              {"ll_calls", r.ll_calls},
              {"local_search_calls", r.local_search_calls},
              {"generations", r.generations},
              {"terminated_by", to_string(r.terminated_by)},
              {"best", individual_to_json(r.best)},
              {"eta_trace", eta},
              {"elite_trace", elite}};
}

nested::RunRecord record_from_json(const Json& j) {
  nested::RunRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ul_fe = j.at("ul_fe").get<std::size_t>();
  r.ll_fe = j.at("ll_fe").get<std::size_t>();
  r.ll_calls = j.at("ll_calls").get<std::size_t>();
  r.local_search_calls = j.at("local_search_calls").get<std::size_t>();
  r.generations = j.at("generations").get<std::size_t>();
  r.terminated_by = parse_termination(j.at("terminated_by").get<std::string>());
  r.best = individual_from_json(j.at("best"));
  for (const auto& p : j.at("eta_trace")) r.eta_trace.push_back({p.at(0).get<std::size_t>(), num_from(p.at(1))});
  for (const auto& p : j.at("elite_trace"))
    r.elite_trace.push_back({p.at(0).get<std::size_t>(), num_from(p.at(1)), num_from(p.at(2))});
  return r;
}

Json market_solution_to_json(const market::MarketSolution& s) {
  auto firm = [](const market::FirmOutcome& f) {
    Json periods = Json::array();
    for (std::size_t t = 0; t < f.periods.size(); ++t) {
      const auto& p = f.periods[t];
      periods.push_back(Json{{"production", f.strategy.q[t]}, {"price", num(p.price)},
                             {"cost", num(p.cost)},           {"revenue", num(p.revenue)},
                             {"gross", num(p.gross)},         {"investment", num(p.investment)},
                             {"marketing", num(p.marketing)}, {"net", num(p.net)}});
    }
    return Json{{"total_net", num(f.total_net)}, {"total_gross", num(f.total_gross)},
                {"total_production", f.total_q}, {"periods", periods}};
  };
  return Json{{"leader", firm(s.leader)},
              {"follower", firm(s.follower)},
              {"upper_objective", num(s.upper_objective)},
              {"lower_objective", num(s.lower_objective)},
              {"total_gross", num(s.total_gross)},
              {"total_production", num(s.total_production)}};
}

void write_json(const std::filesystem::path& file, const Json& j) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("failed writing " + file.string());
}

Json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read " + file.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("malformed file " + file.string() + ": " + e.what());
  }
}

std::string format_double(double v) { return fmt::format("{}", v); }

void write_csv(const std::filesystem::path& file, const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  auto line = [&](const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

CsvRow market_series_header(const CsvRow& prefix) {
  CsvRow h = prefix;
  for (const char* c : {"side", "period", "production", "price", "gross", "investment", "marketing", "net"})
    h.emplace_back(c);
  return h;
}

std::vector<CsvRow> market_series_rows(const market::MarketSolution& s, const CsvRow& prefix) {
  std::vector<CsvRow> rows;
  for (const auto& [side, firm] : {std::pair{"leader", &s.leader}, std::pair{"follower", &s.follower}}) {
    for (std::size_t t = 0; t < firm->periods.size(); ++t) {
      const auto& p = firm->periods[t];
      CsvRow row = prefix;
      row.emplace_back(side);
      row.push_back(std::to_string(t + 1));
      row.push_back(std::to_string(firm->strategy.q[t]));
      for (double v : {p.price, p.gross, p.investment, p.marketing, p.net}) row.push_back(format_double(v));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw ConfigError("cannot create output directory " + dir.string());
  const auto probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace bilevel::bench
