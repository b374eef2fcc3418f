#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bilevel::bench {

/// Left-aligned first column, right-aligned others, two spaces apart.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

struct ReportOutput {
  std::string text;
  std::vector<std::filesystem::path> written;
};

/// Reads summary files (summary.json, sweep.json, verify.json, scenario.json;
/// directories are searched recursively) and renders them. Campaigns give one
/// table per metric with a row per campaign; their run records are read back
/// and the eta and elite traces are written as CSV when `out_dir` is set.
/// Malformed files raise ConfigError naming the file.
ReportOutput cmd_report(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out_dir = {});

}  // namespace bilevel::bench
