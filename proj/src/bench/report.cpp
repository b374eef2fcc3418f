#include "bilevel/bench/report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "bilevel/bench/records.hpp"
#include "bilevel/errors.hpp"

namespace bilevel::bench {

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kSummaryNames{"summary.json", "sweep.json", "verify.json", "scenario.json"};

std::vector<fs::path> collect(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(in))
        if (e.is_regular_file() && kSummaryNames.count(e.path().filename().string())) found.push_back(e.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

std::string g(double v) { return fmt::format("{:.6g}", v); }

struct Campaign {
  std::string problem;
  Json summary;
};

struct Builder {
  std::string text;
  std::vector<Campaign> campaigns;
  std::vector<CsvRow> eta_rows;
  std::vector<CsvRow> elite_rows;
};

void add_campaign(Builder& b, const fs::path& file, const Json& j) {
  const auto problem = j.at("problem").get<std::string>();
  for (const auto& run : j.at("runs")) {
    if (!run.at("ok").get<bool>()) continue;
    const fs::path rf = file.parent_path() / run.at("file").get<std::string>();
    nested::RunRecord rec;
    try {
      rec = record_from_json(read_json(rf).at("record"));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("malformed record file " + rf.string() + ": " + e.what());
    }
    const auto idx = std::to_string(run.at("index").get<std::size_t>());
    for (const auto& p : rec.eta_trace)
      b.eta_rows.push_back({problem, idx, std::to_string(p.generation), format_double(p.eta)});
    for (const auto& p : rec.elite_trace)
      b.elite_rows.push_back(
          {problem, idx, std::to_string(p.generation), format_double(p.upper_obj), format_double(p.lower_obj)});
  }
  b.campaigns.push_back({problem, j});
}

std::string market_table(const Json& m) {
  std::vector<std::vector<std::string>> rows;
  for (const char* side : {"leader", "follower"}) {
    const auto& periods = m.at(side).at("periods");
    for (std::size_t t = 0; t < periods.size(); ++t) {
      const auto& p = periods[t];
      rows.push_back({side, std::to_string(t + 1), std::to_string(p.at("production").get<std::int64_t>()),
                      g(p.at("price").get<double>()), g(p.at("gross").get<double>()),
                      g(p.at("investment").get<double>()), g(p.at("marketing").get<double>()),
                      g(p.at("net").get<double>())});
    }
  }
  return render_table({"side", "period", "production", "price", "gross", "investment", "marketing", "net"}, rows);
}

void add_sweep(Builder& b, const Json& j) {
  int n_lo = 1 << 30, n_hi = 0, m_lo = 1 << 30, m_hi = 0;
  for (const auto& c : j.at("cells")) {
    n_lo = std::min(n_lo, c.at("leaders").get<int>());
    n_hi = std::max(n_hi, c.at("leaders").get<int>());
    m_lo = std::min(m_lo, c.at("followers").get<int>());
    m_hi = std::max(m_hi, c.at("followers").get<int>());
  }
  auto matrix = [&](const char* title, const char* key, double scale) {
    std::vector<std::string> header{title};
    for (int m = m_lo; m <= m_hi; ++m) header.push_back(fmt::format("{} F", m));
    std::vector<std::vector<std::string>> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
      std::vector<std::string> row{fmt::format("{} L", n)};
      for (int m = m_lo; m <= m_hi; ++m) {
        std::string cell;
        for (const auto& c : j.at("cells"))
          if (c.at("leaders").get<int>() == n && c.at("followers").get<int>() == m && c.at("ok").get<bool>())
            cell = fmt::format("{:.4f}", c.at(key).get<double>() / scale);
        row.push_back(cell);
      }
      rows.push_back(std::move(row));
    }
    return render_table(header, rows);
  };
  b.text += "Sum of gross profits over all players\n" + matrix("1e5 x", "total_gross", 1e5) + "\n";
  b.text += "Sum of productions over all players\n" + matrix("1e4 x", "total_production", 1e4) + "\n";
  const auto& v = j.at("violations");
  b.text += fmt::format("property violations: {}\n", v.size());
  for (const auto& s : v) b.text += "  " + s.get<std::string>() + "\n";
  b.text += "\n";
}

void add_verify(Builder& b, const Json& j) {
  const auto& cand = j.at("candidate");
  b.text += fmt::format("verify: {}\n", j.at("verdict").get<std::string>());
  b.text += fmt::format("  candidate upper {} lower {} F={}\n", cand.at("upper").at("ints").dump(),
                        cand.at("lower").at("ints").dump(), g(cand.at("upper_obj").get<double>()));
  const auto& gb = j.at("grid_best");
  b.text += fmt::format("  grid best upper {} lower {} F={}\n", gb.at("upper").at("ints").dump(),
                        gb.at("lower").at("ints").dump(), g(gb.at("upper_obj").get<double>()));
  b.text += fmt::format("  improvements {}, probes {}, evaluations {}, window edge hits {}\n\n",
                        j.at("improvements").size(), j.at("local_probes").get<std::size_t>(),
                        j.at("evaluations").get<std::size_t>(), j.at("edge_hits").get<std::size_t>());
}

void add_scenario(Builder& b, const Json& j) {
  b.text += "scenario";
  if (!j.at("scale").is_null()) b.text += fmt::format(" (scale {})", j.at("scale").get<double>());
  b.text += "\n" + market_table(j.at("scenario").at("market"));
  if (j.contains("reference")) {
    b.text += "reference\n" + market_table(j.at("reference").at("market"));
    b.text += fmt::format("leader net change {}, follower net change {}\n", g(j.at("leader_net_change").get<double>()),
                          g(j.at("follower_net_change").get<double>()));
  }
  b.text += "\n";
}

void campaign_tables(Builder& b) {
  if (b.campaigns.empty()) return;
  struct Metric {
    const char* key;
    const char* title;
  };
  for (const Metric m : {Metric{"ul_fe", "Total UL FE"}, Metric{"ll_fe", "Total LL FE"}, Metric{"ll_calls", "LL calls"},
                         Metric{"ul_accuracy", "UL accuracy"}, Metric{"ll_accuracy", "LL accuracy"}}) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : b.campaigns) {
      if (!c.summary.contains(m.key)) continue;
      const auto& s = c.summary.at(m.key);
      rows.push_back({c.problem, g(s.at("best").get<double>()), g(s.at("median").get<double>()),
                      g(s.at("worst").get<double>()), std::to_string(s.at("count").get<std::size_t>())});
    }
    if (rows.empty()) continue;
    b.text += std::string(m.title) + "\n" + render_table({"problem", "best", "median", "worst", "runs"}, rows) + "\n";
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : b.campaigns) {
    const auto& s = c.summary;
    rows.push_back({c.problem, std::to_string(s.at("completed").get<std::size_t>()),
                    std::to_string(s.at("failed").size()), g(s.at("ll_fe_per_call").get<double>()),
                    s.contains("best") ? g(s.at("best").at("upper_obj").get<double>()) : ""});
  }
  b.text += "Runs\n" + render_table({"problem", "completed", "failed", "LL FE per call", "best F"}, rows) + "\n";
  for (const auto& c : b.campaigns)
    if (c.summary.contains("market")) b.text += c.problem + " best run\n" + market_table(c.summary.at("market")) + "\n";
}

}  // namespace

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  };
  measure(header);
  for (const auto& r : rows) measure(r);
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < r.size() ? r[i] : "";
      if (i) s += "  ";
      s += i == 0 ? fmt::format("{:<{}}", cell, width[i]) : fmt::format("{:>{}}", cell, width[i]);
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out += s + "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

ReportOutput cmd_report(const std::vector<fs::path>& inputs, const fs::path& out_dir) {
  Builder b;
  for (const auto& file : collect(inputs)) {
    const Json j = read_json(file);
    try {
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "campaign")
        add_campaign(b, file, j);
      else if (kind == "sweep")
        add_sweep(b, j);
      else if (kind == "verify")
        add_verify(b, j);
      else if (kind == "scenario")
        add_scenario(b, j);
      else
        throw ConfigError("unknown kind '" + kind + "'");
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      if (what.find(file.string()) != std::string::npos || what.find("record file") != std::string::npos) throw;
      throw ConfigError("malformed file " + file.string() + ": " + what);
    } catch (const std::exception& e) {
      throw ConfigError("malformed file " + file.string() + ": " + e.what());
    }
  }
  campaign_tables(b);

  ReportOutput out;
  out.text = std::move(b.text);
  if (!out_dir.empty() && !b.campaigns.empty()) {
    ensure_writable_dir(out_dir);
    out.written.push_back(out_dir / "eta_trace.csv");
    write_csv(out.written.back(), {"problem", "run", "generation", "eta"}, b.eta_rows);
    out.written.push_back(out_dir / "elite_trace.csv");
    write_csv(out.written.back(), {"problem", "run", "generation", "upper_obj", "lower_obj"}, b.elite_rows);
  }
  return out;
}

}  // namespace bilevel::bench
