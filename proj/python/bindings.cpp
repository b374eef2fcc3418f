#include <cstdint>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bilevel/bench/campaign.hpp"
#include "bilevel/bench/config.hpp"
#include "bilevel/bench/records.hpp"
#include "bilevel/errors.hpp"
#include "bilevel/market/model.hpp"
#include "bilevel/nested/solver.hpp"
#include "bilevel/smd/smd.hpp"

namespace py = pybind11;
using namespace bilevel;
using bench::Json;

namespace {

bench::ExperimentConfig parse_config(const std::string& text) {
  bench::ExperimentConfig c;
  bench::apply_json(c, Json::parse(text));
  c.validate();
  return c;
}

std::string solve(const std::string& config_json, std::uint64_t seed) {
  const auto c = parse_config(config_json);
  Json j;
  {
    py::gil_scoped_release release;
    const auto rec = nested::solve(c.problem(), c.ul, c.ll, seed, c.solver);
    j = bench::record_to_json(rec);
    if (c.kind == bench::ProblemKind::market)
      j["market"] = bench::market_solution_to_json(market::describe(c.market, rec.best.upper, rec.best.lower));
    if (c.kind == bench::ProblemKind::smd) {
      const auto acc = smd::accuracy(rec, smd::make_smd(c.smd_id, c.vars));
      j["accuracy"] = {{"upper", acc.upper}, {"lower", acc.lower}};
    }
  }
  return j.dump();
}

std::string run(const std::string& config_json) {
  const auto c = parse_config(config_json);
  py::gil_scoped_release release;
  return bench::summary_to_json(bench::run_campaign(c), c).dump();
}

std::string verify(const std::string& config_json, const std::string& candidate_json) {
  const auto c = parse_config(config_json);
  const auto candidate = bench::individual_from_json(Json::parse(candidate_json));
  py::gil_scoped_release release;
  bench::verify_cost(c);
  const auto v = bench::verify_candidate(c, candidate);
  Json improvements = Json::array();
  for (const auto& imp : v.local.improvements)
    improvements.push_back({{"upper", bench::genome_to_json(imp.upper)}, {"upper_obj", imp.upper_obj}});
  return Json{{"verdict", v.verdict},
              {"grid_matches", v.grid_matches},
              {"local_optimum", v.local.is_local_optimum()},
              {"improvements", improvements},
              {"grid_best", bench::individual_to_json(v.grid.best)},
              {"evaluations", v.local.evaluations + v.grid.evaluations}}
      .dump();
}

std::string scenario(const std::string& config_json, const std::vector<std::int64_t>& leader_q, std::size_t restarts) {
  const auto c = parse_config(config_json);
  if (c.kind != bench::ProblemKind::market) throw ConfigError("scenario needs a market preset");
  evo::Genome upper;
  upper.ints = leader_q;
  py::gil_scoped_release release;
  const auto r = bench::solve_scenario(c, upper, restarts);
  return Json{{"feasible", r.feasible},
              {"ll_fe", r.ll_fe},
              {"lower", bench::genome_to_json(r.lower)},
              {"market", bench::market_solution_to_json(r.solution)}}
      .dump();
}

std::string describe_market(const std::string& config_json, const std::string& upper_json,
                            const std::string& lower_json) {
  const auto c = parse_config(config_json);
  if (c.kind != bench::ProblemKind::market) throw ConfigError("describe_market needs a market preset");
  const auto u = bench::genome_from_json(Json::parse(upper_json));
  const auto l = bench::genome_from_json(Json::parse(lower_json));
  return bench::market_solution_to_json(market::describe(c.market, u, l)).dump();
}

std::string smd_optimum(int id, std::size_t vars) {
  const auto inst = smd::make_smd(id, vars);
  return Json{{"upper", bench::genome_to_json(inst.upper_optimum)},
              {"lower", bench::genome_to_json(inst.lower_optimum)},
              {"upper_value", inst.upper_optimal_value},
              {"lower_value", inst.lower_optimal_value},
              {"dims", {{"p", inst.dims.p}, {"q", inst.dims.q}, {"r", inst.dims.r}, {"s", inst.dims.s}}}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nested evolutionary bilevel solver";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);

  m.def("price", &market::price, py::arg("own_cum_mkt"), py::arg("total_q"));
  m.def("cost", &market::cost, py::arg("q"), py::arg("own_cum_inv"));
  m.def("solve", &solve, py::arg("config_json"), py::arg("seed"));
  m.def("run", &run, py::arg("config_json"));
  m.def("verify", &verify, py::arg("config_json"), py::arg("candidate_json"));
  m.def("scenario", &scenario, py::arg("config_json"), py::arg("leader_q"), py::arg("restarts") = 5);
  m.def("describe_market", &describe_market, py::arg("config_json"), py::arg("upper_json"),
        py::arg("lower_json"));
  m.def("smd_optimum", &smd_optimum, py::arg("id"), py::arg("vars") = 10);
}
