#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilevel/evo/genome.hpp"
#include "bilevel/market/model.hpp"
#include "bilevel/nested/solver.hpp"

namespace bilevel::bench {

using Json = nlohmann::json;

Json genome_to_json(const evo::Genome& g);
evo::Genome genome_from_json(const Json& j);

Json individual_to_json(const nested::Individual& ind);
nested::Individual individual_from_json(const Json& j);

/// Lossless for every RunRecord field (doubles are written with round-trip
/// precision).
Json record_to_json(const nested::RunRecord& r);
nested::RunRecord record_from_json(const Json& j);

/// Both representative firms period by period.
Json market_solution_to_json(const market::MarketSolution& s);

void write_json(const std::filesystem::path& file, const Json& j);
/// Throws ConfigError naming the file when it is missing or malformed.
Json read_json(const std::filesystem::path& file);

using CsvRow = std::vector<std::string>;

void write_csv(const std::filesystem::path& file, const CsvRow& header, const std::vector<CsvRow>& rows);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

/// Rows of side,period,production,price,gross,investment,marketing,net for
/// both representative firms, each prefixed with `prefix`.
std::vector<CsvRow> market_series_rows(const market::MarketSolution& s, const CsvRow& prefix = {});
CsvRow market_series_header(const CsvRow& prefix = {});

/// Creates `dir` if needed and checks that a file can be written there.
void ensure_writable_dir(const std::filesystem::path& dir);

}  // namespace bilevel::bench
