#include "jlp/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "jlp/interval_null.hpp"
#include "jlp/numerics.hpp"
#include "jlp/point_null.hpp"

namespace jlp::report {

namespace {

using ordered_json = nlohmann::ordered_json;

double parse_real(const std::string& key, const std::string& value) {
  if (value.empty()) {
    throw invalid_input("option '" + key + "' needs a value");
  }
  char* end = nullptr;
  const double parsed = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || !std::isfinite(parsed)) {
    throw invalid_input("option '" + key + "': cannot parse '" + value +
                        "' as a real number");
  }
  return parsed;
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  const double parsed = parse_real(key, value);
  if (!(parsed >= 0.0) || parsed != std::floor(parsed) || parsed > 9.0e18) {
    throw invalid_input("option '" + key + "': '" + value +
                        "' is not a nonnegative integer");
  }
  return static_cast<std::uint64_t>(parsed);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw invalid_input("option '" + key + "': expected true/false, got '" +
                      value + "'");
}

GridSpec parse_grid(const std::string& value) {
  GridSpec grid;
  const auto first = value.find(':');
  const auto second = value.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw invalid_input(
        "option 'grid': expected lo:hi:count, e.g. 10:1e8:29");
  }
  grid.lo = parse_real("grid", value.substr(0, first));
  grid.hi = parse_real("grid", value.substr(first + 1, second - first - 1));
  grid.count = static_cast<std::size_t>(
      parse_count("grid", value.substr(second + 1)));
  if (!(grid.lo > 0.0) || !(grid.hi >= grid.lo) || grid.count < 1) {
    throw invalid_input("option 'grid': need 0 < lo <= hi and count >= 1");
  }
  return grid;
}

interval_null::RegionPrior parse_region_prior(const std::string& key,
                                              const std::string& value) {
  if (value == "uniform") {
    return interval_null::RegionPrior{interval_null::PriorShape::uniform, 1.0};
  }
  constexpr const char* prefix = "normal:";
  if (value.rfind(prefix, 0) == 0) {
    const double scale = parse_real(key, value.substr(7));
    if (!(scale > 0.0)) {
      throw invalid_input("option '" + key + "': prior scale must be positive");
    }
    return interval_null::RegionPrior{
        interval_null::PriorShape::truncated_normal, scale};
  }
  throw invalid_input("option '" + key + "': expected 'uniform' or "
                      "'normal:<scale>', got '" + value + "'");
}

std::vector<double> log_spaced(const GridSpec& grid) {
  std::vector<double> values;
  values.reserve(grid.count);
  if (grid.count == 1) {
    values.push_back(grid.lo);
    return values;
  }
  const double ratio = std::log(grid.hi / grid.lo);
  for (std::size_t i = 0; i < grid.count; ++i) {
    values.push_back(grid.lo * std::exp(ratio * static_cast<double>(i) /
                                        static_cast<double>(grid.count - 1)));
  }
  values.back() = grid.hi;
  return values;
}

std::vector<std::uint64_t> integer_grid(const std::vector<double>& values) {
  std::vector<std::uint64_t> grid;
  grid.reserve(values.size());
  for (double v : values) {
    const auto rounded = static_cast<std::uint64_t>(
        std::llround(std::max(1.0, v)));
    if (grid.empty() || rounded > grid.back()) grid.push_back(rounded);
  }
  return grid;
}

// Quarter-decade defaults covering both figure panels.
std::vector<std::uint64_t> default_n_grid() {
  std::vector<std::uint64_t> grid;
  for (int k = 4; k <= 32; ++k) {
    const auto v = static_cast<std::uint64_t>(
        std::llround(std::pow(10.0, k / 4.0)));
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  return grid;
}

std::vector<double> default_tau_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 16; ++k) {
    grid.push_back(std::pow(10.0, k / 4.0));
  }
  return grid;
}

double resolve_z(const RunConfig& config, double default_alpha) {
  // z may come in directly or through alpha; given both, they must agree as
  // the same just-significant statistic.
  if (config.z && config.alpha) {
    point_null::require_z_alpha_consistent(*config.z, *config.alpha,
                                           config.quote_z);
    return *config.z;
  }
  if (config.z) return *config.z;
  const double alpha = config.alpha.value_or(default_alpha);
  return config.quote_z ? point_null::quoted_z_from_alpha(alpha)
                        : point_null::z_from_alpha(alpha);
}

std::uint64_t require_n(const RunConfig& config) {
  if (!config.n) {
    throw invalid_input("missing required option '--n'");
  }
  if (*config.n < 1) {
    throw invalid_input("option '--n' must be >= 1");
  }
  return *config.n;
}

void push_input(RunResult& result, const std::string& name, Cell cell) {
  result.inputs.emplace_back(name, std::move(cell));
}

RunResult run_table1(const RunConfig& config) {
  std::vector<double> alphas = config.alphas;
  if (alphas.empty()) {
    alphas = {0.05, 0.04, 0.03, 0.02, 0.01, 0.005};
  }
  const double c = config.c.value_or(0.5);
  const double tau = config.tau.value_or(1.0);
  const double sigma = config.sigma.value_or(1.0);

  RunResult result;
  result.table.columns = {"alpha", "posterior_target", "lindley_min_n",
                          "conjugate_min_n", "error"};
  for (double alpha : alphas) {
    std::vector<Cell> row;
    row.emplace_back(alpha);
    row.emplace_back(1.0 - alpha);
    std::string error_note;
    try {
      paradox::StrongContrastQuery lindley{
          alpha, paradox::Setup::lindley_uniform, c, tau, sigma};
      paradox::StrongContrastQuery conjugate{
          alpha, paradox::Setup::normal_conjugate, c, tau, sigma};
      row.emplace_back(paradox::min_n_strong_contrast(lindley));
      row.emplace_back(paradox::min_n_strong_contrast(conjugate));
    } catch (const no_convergence& failure) {
      while (row.size() < 4) row.emplace_back(std::monostate{});
      error_note = failure.what();
    }
    row.emplace_back(std::move(error_note));
    result.table.rows.push_back(std::move(row));
  }
  push_input(result, "c", c);
  push_input(result, "tau", tau);
  push_input(result, "sigma", sigma);
  result.metadata.emplace_back(
      "integer_convention", "smallest n with posterior >= 1 - alpha");
  result.metadata.emplace_back("z_precision",
                               "full double-precision quantile");
  return result;
}

RunResult run_figure1(const RunConfig& config) {
  const char panel = static_cast<char>(std::toupper(config.panel));
  if (panel != 'A' && panel != 'B') {
    throw invalid_input("option '--panel' must be A or B");
  }
  const double c = config.c.value_or(0.5);

  RunResult result;
  if (panel == 'A') {
    const double z = resolve_z(config, 0.05);
    const double tau = config.tau.value_or(1.0);
    std::vector<std::uint64_t> grid =
        config.grid ? integer_grid(log_spaced(*config.grid))
                    : default_n_grid();
    const auto series = paradox::lindley_curve(z, tau, c, grid);
    result.table.columns = {"n", "posterior_h0", "p_value"};
    for (const auto& point : series.points) {
      result.table.rows.push_back(
          {Cell{static_cast<std::uint64_t>(point.abscissa)},
           Cell{point.posterior_h0}, Cell{point.p_value}});
    }
    push_input(result, "panel", std::string("A"));
    push_input(result, "z", z);
    push_input(result, "tau", tau);
    push_input(result, "c", c);
  } else {
    const std::uint64_t n = config.n.value_or(100);
    const double z = config.z.value_or(2.5);
    std::vector<double> grid =
        config.grid ? log_spaced(*config.grid) : default_tau_grid();
    const auto series = paradox::bartlett_curve(z, n, c, grid);
    result.table.columns = {"tau", "posterior_h0", "p_value"};
    for (const auto& point : series.points) {
      result.table.rows.push_back(
          {Cell{point.abscissa}, Cell{point.posterior_h0},
           Cell{point.p_value}});
    }
    push_input(result, "panel", std::string("B"));
    push_input(result, "n", n);
    push_input(result, "z", z);
    push_input(result, "c", c);
  }
  result.metadata.emplace_back("quote_z", config.quote_z ? "true" : "false");
  return result;
}

RunResult run_analyze(const RunConfig& config) {
  const std::uint64_t n = require_n(config);
  if (!config.delta) {
    throw invalid_input("missing required option '--delta'");
  }
  const double sigma = config.sigma.value_or(1.0);
  const double theta0 = config.theta0.value_or(0.0);
  const double alpha = config.alpha.value_or(0.05);
  const double c = config.c.value_or(0.5);
  // Here z is the observed statistic and alpha the test level, two distinct
  // roles; omitting z yields the just-significant boundary scenario.
  double z;
  if (config.z) {
    z = *config.z;
  } else {
    z = config.quote_z ? point_null::quoted_z_from_alpha(alpha)
                       : point_null::z_from_alpha(alpha);
  }

  if (config.tau && config.interval_width) {
    throw invalid_input(
        "options '--tau' and '--interval-width' are mutually exclusive");
  }
  point_null::PriorSpec prior;
  prior.mass_on_null = c;
  std::string slab_name = "conjugate";
  double slab_scale = config.tau.value_or(1.0);
  if (config.interval_width) {
    prior.slab = point_null::UniformSlab{*config.interval_width};
    slab_name = "uniform";
    slab_scale = *config.interval_width;
  } else {
    prior.slab = point_null::ConjugateSlab{slab_scale};
  }

  interval_null::IntervalNullSpec spec =
      interval_null::IntervalNullSpec::defaults(*config.delta, sigma);
  if (config.outer_bound) spec.outer_bound = *config.outer_bound;
  spec.inside = parse_region_prior("inside-prior", config.inside_prior);
  spec.outside = parse_region_prior("outside-prior", config.outside_prior);

  const auto scenario = point_null::Scenario::from_z(theta0, sigma, n, z);
  const auto report =
      interval_null::agreement_report(scenario, prior, spec, alpha);

  RunResult result;
  result.table.columns = {
      "theta0",        "sigma",          "n",
      "z",             "xbar",           "alpha",
      "c",             "slab",           "slab_scale",
      "delta",         "outer_bound",    "p_value",
      "point_decision", "point_posterior_h0", "interval_log_bf01",
      "interval_bf01", "tost_lower_t",   "tost_upper_t",
      "tost_concluded", "interval_agreement", "label"};
  result.table.rows.push_back(
      {Cell{theta0}, Cell{sigma}, Cell{n}, Cell{z},
       Cell{scenario.sample_mean()}, Cell{alpha}, Cell{c},
       Cell{slab_name}, Cell{slab_scale}, Cell{spec.delta},
       Cell{spec.outer_bound}, Cell{report.p_value},
       Cell{std::string(to_string(report.point_null_frequentist))},
       Cell{report.point_null_bayes_posterior},
       Cell{report.interval.log_bf01}, Cell{report.interval.bf01},
       Cell{report.tost.lower_t}, Cell{report.tost.upper_t},
       Cell{std::string(report.tost.concluded_equivalence ? "true" : "false")},
       Cell{std::string(report.interval_agreement ? "true" : "false")},
       Cell{std::string(to_string(report.label))}});
  result.metadata.emplace_back("h1_tail_bound",
                               format_real(report.interval.h1_tail_bound));
  result.metadata.emplace_back(
      "label_semantics",
      "bartlett-inflated when the conflict disappears at unit slab scale");
  return result;
}

RunResult run_zone(const RunConfig& config) {
  const std::uint64_t n = require_n(config);
  const double alpha = config.alpha.value_or(0.05);
  const double tau = config.tau.value_or(1.0);
  const double c = config.c.value_or(0.5);
  const double threshold = config.threshold.value_or(0.5);

  const auto zone = paradox::conflict_zone(n, alpha, tau, c, threshold);

  RunResult result;
  result.table.columns = {"n",     "alpha", "tau",  "c",
                          "threshold", "empty", "z_lo", "z_hi",
                          "prob_null_true"};
  std::vector<Cell> row{Cell{n}, Cell{alpha}, Cell{tau}, Cell{c},
                        Cell{threshold}};
  if (zone.empty) {
    row.emplace_back(std::string("true"));
    row.emplace_back(std::monostate{});
    row.emplace_back(std::monostate{});
    row.emplace_back(0.0);
  } else {
    row.emplace_back(std::string("false"));
    row.emplace_back(zone.z_lo);
    row.emplace_back(zone.z_hi);
    row.emplace_back(zone.probability_null_true());
  }
  result.table.rows.push_back(std::move(row));
  return result;
}

RunResult run_simulate(const RunConfig& config) {
  const std::uint64_t n = require_n(config);
  const double alpha = config.alpha.value_or(0.05);
  const double tau = config.tau.value_or(1.0);
  const double c = config.c.value_or(0.5);

  const auto sim = paradox::simulate_conflict_rate(
      n, alpha, tau, c, config.truth, config.reps, config.seed,
      config.workers);

  RunResult result;
  result.table.columns = {"n",    "alpha", "tau",       "c",
                          "truth", "reps",  "seed",      "conflicts",
                          "rate", "std_error"};
  result.table.rows.push_back(
      {Cell{n}, Cell{alpha}, Cell{tau}, Cell{c},
       Cell{std::string(config.truth == paradox::TruthModel::null_true
                            ? "null-true"
                            : "mixture")},
       Cell{sim.reps}, Cell{sim.seed}, Cell{sim.conflicts}, Cell{sim.rate},
       Cell{sim.std_error}});
  result.metadata.emplace_back(
      "mixture_slab",
      "effects drawn from the conjugate normal slab (scale tau*sigma), "
      "then standardized");
  result.metadata.emplace_back(
      "substreams", "deterministic per replicate, keyed on (seed, index)");
  return result;
}

ordered_json cell_to_json(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return nullptr;
  if (const auto* integer = std::get_if<std::uint64_t>(&cell)) {
    return *integer;
  }
  if (const auto* real = std::get_if<double>(&cell)) {
    if (!std::isfinite(*real)) return render_cell(cell);  // "inf" etc.
    // Parse the 6-digit rendering back so CSV and JSON agree exactly.
    return std::strtod(format_real(*real).c_str(), nullptr);
  }
  return std::get<std::string>(cell);
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "table1") return Command::table1;
  if (name == "figure1") return Command::figure1;
  if (name == "analyze") return Command::analyze;
  if (name == "zone") return Command::zone;
  if (name == "simulate") return Command::simulate;
  throw invalid_input("unknown command '" + name + "'");
}

const char* to_string(Command command) {
  switch (command) {
    case Command::table1: return "table1";
    case Command::figure1: return "figure1";
    case Command::analyze: return "analyze";
    case Command::zone: return "zone";
    case Command::simulate: return "simulate";
  }
  return "table1";
}

void apply_key_value(RunConfig& config, const std::string& key,
                     const std::string& value) {
  if (key == "command") {
    config.command = parse_command(value);
  } else if (key == "alpha") {
    config.alphas.clear();
    std::stringstream stream(value);
    std::string token;
    while (std::getline(stream, token, ',')) {
      config.alphas.push_back(parse_real("alpha", token));
    }
    if (config.alphas.empty()) {
      throw invalid_input("option 'alpha': empty list");
    }
    if (config.alphas.size() == 1) config.alpha = config.alphas.front();
    else config.alpha.reset();
  } else if (key == "n") {
    config.n = parse_count("n", value);
  } else if (key == "z") {
    config.z = parse_real("z", value);
  } else if (key == "sigma") {
    config.sigma = parse_real("sigma", value);
  } else if (key == "theta0") {
    config.theta0 = parse_real("theta0", value);
  } else if (key == "c") {
    config.c = parse_real("c", value);
  } else if (key == "tau") {
    config.tau = parse_real("tau", value);
  } else if (key == "interval-width") {
    config.interval_width = parse_real("interval-width", value);
  } else if (key == "delta") {
    config.delta = parse_real("delta", value);
  } else if (key == "outer-bound") {
    config.outer_bound = parse_real("outer-bound", value);
  } else if (key == "threshold") {
    config.threshold = parse_real("threshold", value);
  } else if (key == "truth") {
    if (value == "null-true") config.truth = paradox::TruthModel::null_true;
    else if (value == "mixture") config.truth = paradox::TruthModel::mixture;
    else throw invalid_input("option 'truth': expected null-true or mixture");
  } else if (key == "seed") {
    config.seed = parse_count("seed", value);
  } else if (key == "reps") {
    const std::uint64_t reps = parse_count("reps", value);
    if (reps < 1) throw invalid_input("option 'reps' must be >= 1");
    config.reps = reps;
  } else if (key == "workers") {
    const std::uint64_t workers = parse_count("workers", value);
    if (workers < 1 || workers > 4096) {
      throw invalid_input("option 'workers' must lie in [1, 4096]");
    }
    config.workers = static_cast<unsigned>(workers);
  } else if (key == "panel") {
    if (value.size() != 1) {
      throw invalid_input("option 'panel' must be A or B");
    }
    config.panel = value[0];
  } else if (key == "grid") {
    config.grid = parse_grid(value);
  } else if (key == "inside-prior") {
    parse_region_prior("inside-prior", value);  // validate now
    config.inside_prior = value;
  } else if (key == "outside-prior") {
    parse_region_prior("outside-prior", value);
    config.outside_prior = value;
  } else if (key == "quote-z") {
    config.quote_z = parse_bool("quote-z", value);
  } else if (key == "format") {
    if (value == "csv") config.format = OutputFormat::csv;
    else if (value == "json") config.format = OutputFormat::json;
    else throw invalid_input("option 'format': expected csv or json");
  } else {
    throw invalid_input("unknown option '" + key + "'");
  }
}

RunResult run(const RunConfig& config) {
  switch (config.command) {
    case Command::table1: return run_table1(config);
    case Command::figure1: return run_figure1(config);
    case Command::analyze: return run_analyze(config);
    case Command::zone: return run_zone(config);
    case Command::simulate: return run_simulate(config);
  }
  throw invalid_input("unknown command");
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

std::string render_cell(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return "";
  if (const auto* integer = std::get_if<std::uint64_t>(&cell)) {
    return std::to_string(*integer);
  }
  if (const auto* real = std::get_if<double>(&cell)) {
    return format_real(*real);
  }
  return std::get<std::string>(cell);
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += render_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const RunConfig& config, const RunResult& result) {
  ordered_json root;
  root["command"] = to_string(config.command);
  ordered_json inputs = ordered_json::object();
  for (const auto& [name, cell] : result.inputs) {
    inputs[name] = cell_to_json(cell);
  }

  if (config.command == Command::analyze && result.table.rows.size() == 1) {
    // Nest the single analyze row: inputs, then one object per verdict.
    const auto& columns = result.table.columns;
    const auto& row = result.table.rows.front();
    ordered_json point = ordered_json::object();
    ordered_json interval = ordered_json::object();
    ordered_json tost = ordered_json::object();
    ordered_json verdict = ordered_json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const std::string& name = columns[i];
      const ordered_json value = cell_to_json(row[i]);
      if (name == "p_value" || name == "point_decision" ||
          name == "point_posterior_h0") {
        point[name] = value;
      } else if (name == "interval_log_bf01" || name == "interval_bf01") {
        interval[name.substr(9)] = value;
      } else if (name.rfind("tost_", 0) == 0) {
        tost[name.substr(5)] = value;
      } else if (name == "interval_agreement" || name == "label") {
        verdict[name] = value;
      } else {
        inputs[name] = value;
      }
    }
    root["inputs"] = inputs;
    ordered_json nested = ordered_json::object();
    nested["point_null"] = point;
    nested["interval_null"] = interval;
    nested["tost"] = tost;
    nested["interval_agreement"] = verdict["interval_agreement"];
    nested["label"] = verdict["label"];
    root["result"] = nested;
  } else {
    root["inputs"] = inputs;
    ordered_json rows = ordered_json::array();
    for (const auto& row : result.table.rows) {
      ordered_json entry = ordered_json::object();
      for (std::size_t i = 0; i < result.table.columns.size(); ++i) {
        entry[result.table.columns[i]] = cell_to_json(row[i]);
      }
      rows.push_back(std::move(entry));
    }
    root["rows"] = rows;
  }

  ordered_json metadata = ordered_json::object();
  for (const auto& [key, value] : result.metadata) {
    metadata[key] = value;
  }
  root["metadata"] = metadata;
  return root.dump(2) + "\n";
}

std::string render(const RunConfig& config, const RunResult& result) {
  return config.format == OutputFormat::json ? render_json(config, result)
                                             : render_csv(result.table);
}

}  // namespace jlp::report
