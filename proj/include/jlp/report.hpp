#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jlp/errors.hpp"
#include "jlp/paradox.hpp"

namespace jlp::report {

enum class Command { table1, figure1, analyze, zone, simulate };
enum class OutputFormat { csv, json };

/// Log-spaced grid request lo..hi with `count` points.
struct GridSpec {
  double lo = 1.0;
  double hi = 10.0;
  std::size_t count = 2;
};

/// One run of the tool: a command plus whichever scenario fields it needs.
/// Unset fields fall back to command-specific defaults at execution time.
struct RunConfig {
  Command command = Command::table1;

  std::vector<double> alphas;  // table1 only; empty means the six defaults
  std::optional<double> alpha;
  std::optional<std::uint64_t> n;
  std::optional<double> z;
  std::optional<double> sigma;
  std::optional<double> theta0;
  std::optional<double> c;
  std::optional<double> tau;
  std::optional<double> interval_width;
  std::optional<double> delta;
  std::optional<double> outer_bound;
  std::optional<double> threshold;
  paradox::TruthModel truth = paradox::TruthModel::null_true;
  std::uint64_t seed = 1;
  std::uint64_t reps = 100000;
  unsigned workers = 1;
  char panel = 'A';
  std::optional<GridSpec> grid;
  std::string inside_prior = "uniform";   // "uniform" or "normal:<scale>"
  std::string outside_prior = "uniform";  // "uniform" or "normal:<scale>"
  bool quote_z = false;  // two-decimal z quote instead of the exact quantile
  OutputFormat format = OutputFormat::csv;
};

/// A report cell: empty, integer, real, or text.
using Cell = std::variant<std::monostate, std::uint64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct RunResult {
  Table table;
  std::vector<std::pair<std::string, Cell>> inputs;    // resolved echo
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Execute the configured command. Throws invalid_input for usage problems,
/// no_convergence / domain_error from the underlying solvers.
RunResult run(const RunConfig& config);

/// Apply one "key=value" setting (the config-file / C-API surface).
/// Throws invalid_input for unknown keys or malformed values.
void apply_key_value(RunConfig& config, const std::string& key,
                     const std::string& value);

Command parse_command(const std::string& name);
const char* to_string(Command command);

/// Reals are rendered to six significant digits; integers undecoratedly.
std::string format_real(double value);
std::string render_cell(const Cell& cell);
std::string render_csv(const Table& table);
std::string render_json(const RunConfig& config, const RunResult& result);
std::string render(const RunConfig& config, const RunResult& result);

}  // namespace jlp::report
