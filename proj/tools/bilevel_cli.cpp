// Command-line harness: bilevel <run|sweep|scenario|verify|report|smd> [options]
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bilevel/bench/campaign.hpp"
#include "bilevel/bench/config.hpp"
#include "bilevel/bench/report.hpp"
#include "bilevel/errors.hpp"

namespace bb = bilevel::bench;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<std::string> preset;
  std::optional<std::size_t> vars;
  bool fast = false;
  bool quiet = false;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON file of flat configuration keys");
  app->add_option("--runs", f.runs, "number of seeded runs");
  app->add_option("--seed", f.seed, "seed of the first run; run i uses seed + i");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--jobs", f.jobs, "runs executed concurrently");
  app->add_option("--preset", f.preset, "market-2l5f, market-1l1f-2p or smd1..smd6");
  app->add_option("--vars", f.vars, "total SMD variables (10, 20, 30, 40)");
  app->add_flag("--fast", f.fast, "5 runs and smaller populations");
  app->add_flag("--quiet", f.quiet, "no progress output");
}

bb::ExperimentConfig build(const CommonFlags& f, const std::string& default_preset) {
  bb::ExperimentConfig c;
  bb::apply_preset(c, default_preset);
  if (!f.config.empty()) c = bb::load_config(f.config, c);
  if (f.preset) bb::apply_preset(c, *f.preset);
  if (f.fast) bb::apply_fast(c);
  if (f.runs) c.runs = *f.runs;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.vars) c.vars = *f.vars;
  c.validate();
  return c;
}

bb::Log logger(const CommonFlags& f) {
  if (f.quiet) return {};
  return [](const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); };
}

std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw bilevel::ConfigError("bad integer '" + item + "' in list '" + s + "'");
    }
  }
  return out;
}

void print_campaign(const bb::CampaignSummary& s, const bb::ExperimentConfig& c) {
  fmt::print("{}: {} of {} runs completed\n", s.problem, s.completed(), s.runs.size());
  for (auto i : s.failed()) fmt::print("  run {} failed: {}\n", i, s.runs[i].error);
  if (!s.best_run) return;
  const auto& b = s.best().best;
  fmt::print("best run {} (seed {}): F={:.6f} f={:.6f} cv={:g}\n", *s.best_run, s.runs[*s.best_run].seed, b.upper_obj,
             b.lower_obj, b.effective_cv());
  fmt::print("UL FE best/median/worst {:g} / {:g} / {:g}\n", s.ul_fe.best, s.ul_fe.median, s.ul_fe.worst);
  fmt::print("LL FE best/median/worst {:g} / {:g} / {:g}\n", s.ll_fe.best, s.ll_fe.median, s.ll_fe.worst);
  if (s.ul_accuracy)
    fmt::print("accuracy median UL {:.3g} LL {:.3g}\n", s.ul_accuracy->median, s.ll_accuracy->median);
  if (s.market)
    fmt::print("total gross {:.2f}, total production {:g}\n", s.market->total_gross, s.market->total_production);
  fmt::print("results in {}\n", c.out.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested bilevel evolutionary solver: experiments and checks"};
  app.require_subcommand(1);

  CommonFlags run_f, sweep_f, scen_f, verify_f, smd_f;
  auto* run = app.add_subcommand("run", "seeded multi-run campaign");
  add_common(run, run_f);

  auto* sweep = app.add_subcommand("sweep", "solve every leader/follower count pair");
  add_common(sweep, sweep_f);

  auto* scen = app.add_subcommand("scenario", "fixed leader strategy, followers best-respond");
  add_common(scen, scen_f);
  std::string scen_q;
  std::optional<double> scen_scale;
  scen->add_option("--q", scen_q, "leader productions per period, comma separated");
  scen->add_option("--scale", scen_scale, "scale applied to the optimum's leader productions");

  auto* verify = app.add_subcommand("verify", "solve, then check the best run with grid searches");
  add_common(verify, verify_f);

  auto* smd = app.add_subcommand("smd", "SMD benchmark campaigns");
  add_common(smd, smd_f);
  std::string smd_ids;
  smd->add_option("--ids", smd_ids, "comma separated SMD ids (default: the preset's)");

  auto* report = app.add_subcommand("report", "render summary files as tables and trace series");
  std::vector<std::string> report_inputs;
  std::string report_out;
  report->add_option("inputs", report_inputs, "summary files or result directories");
  report->add_option("--out", report_out, "directory for trace CSV files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto c = build(run_f, "market-1l1f-2p");
      print_campaign(bb::cmd_run(c, logger(run_f)), c);
    } else if (sweep->parsed()) {
      const auto c = build(sweep_f, "market-2l5f");
      bb::cmd_sweep(c, logger(sweep_f));
      fmt::print("{}", bb::cmd_report({c.out / "sweep.json"}).text);
    } else if (scen->parsed()) {
      auto c = build(scen_f, "market-2l5f");
      if (!scen_q.empty()) c.scenario_q = parse_list(scen_q);
      if (scen_scale) c.scenario_scale = *scen_scale;
      c.validate();
      bb::cmd_scenario(c, logger(scen_f));
      fmt::print("{}", bb::cmd_report({c.out / "scenario.json"}).text);
    } else if (verify->parsed()) {
      const auto c = build(verify_f, "market-1l1f-2p");
      bb::cmd_verify(c, logger(verify_f));
      fmt::print("{}", bb::cmd_report({c.out / "verify.json"}).text);
    } else if (smd->parsed()) {
      const auto c = build(smd_f, smd_f.preset ? *smd_f.preset : "smd1");
      std::vector<int> ids;
      for (auto v : parse_list(smd_ids)) ids.push_back(static_cast<int>(v));
      bb::cmd_smd(c, ids, logger(smd_f));
      fmt::print("{}", bb::cmd_report({c.out}).text);
    } else if (report->parsed()) {
      std::vector<std::filesystem::path> in(report_inputs.begin(), report_inputs.end());
      const auto r = bb::cmd_report(in, report_out);
      fmt::print("{}", r.text);
      for (const auto& p : r.written) fmt::print("wrote {}\n", p.string());
    }
  } catch (const bilevel::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
