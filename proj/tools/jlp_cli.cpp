// jlp command-line tool: thin shell over the C API in jlp.h.
//
//   jlp table1                         minimum-n table at the six levels
//   jlp figure1 --panel B              posterior-vs-prior-scale series
//   jlp analyze --n 1000000 --delta 0.3   joint point/interval verdict
//   jlp zone --n 1000000               rejection-vs-support z band
//   jlp simulate --n 1000000 --reps 100000 --seed 7
//
// Exit codes: 0 ok, 2 usage, 3 non-convergence, 4 domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jlp.h"

namespace {

struct OptionBinding {
  std::string key;      // jlp_run_set key
  std::string value;    // captured CLI value
  CLI::Option* option = nullptr;
};

struct CommandContext {
  CLI::App* app = nullptr;
  std::vector<std::unique_ptr<OptionBinding>> bindings;
  std::string config_path;
  std::string out_path;
};

void bind(CommandContext& context, const std::string& key,
          const std::string& description) {
  auto binding = std::make_unique<OptionBinding>();
  binding->key = key;
  binding->option =
      context.app->add_option("--" + key, binding->value, description);
  context.bindings.push_back(std::move(binding));
}

void bind_common(CommandContext& context) {
  context.app->add_option("--config", context.config_path,
                          "key=value file supplying any option");
  context.app->add_option("--out", context.out_path,
                          "output path (default: standard output)");
  bind(context, "format", "output format: csv or json (default csv)");
}

int fail(const std::string& message, int code) {
  std::cerr << "jlp: error: " << message << "\n";
  return code;
}

int apply_config_file(jlp_run* run, const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    return fail("cannot open config file '" + path + "'", 2);
  }
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    const std::string trimmed = line.substr(begin, end - begin + 1);
    const auto equals = trimmed.find('=');
    if (equals == std::string::npos) {
      return fail("config file '" + path + "' line " +
                      std::to_string(line_number) + ": expected key=value",
                  2);
    }
    const std::string key = trimmed.substr(0, equals);
    const std::string value = trimmed.substr(equals + 1);
    if (jlp_run_set(run, key.c_str(), value.c_str()) != JLP_OK) {
      return fail("config file '" + path + "' line " +
                      std::to_string(line_number) + ": " +
                      jlp_run_error_message(run),
                  2);
    }
  }
  return 0;
}

int execute(const std::string& command, const CommandContext& context) {
  std::unique_ptr<jlp_run, decltype(&jlp_run_free)> run(
      jlp_run_new(command.c_str()), &jlp_run_free);
  if (!run) return fail("could not create run for '" + command + "'", 2);

  if (!context.config_path.empty()) {
    if (int code = apply_config_file(run.get(), context.config_path)) {
      return code;
    }
    // The subcommand on the command line wins over any command= in the file.
    jlp_run_set(run.get(), "command", command.c_str());
  }
  for (const auto& binding : context.bindings) {
    if (binding->option->count() == 0) continue;
    if (jlp_run_set(run.get(), binding->key.c_str(),
                    binding->value.c_str()) != JLP_OK) {
      return fail(jlp_run_error_message(run.get()), 2);
    }
  }

  const jlp_status status = jlp_run_execute(run.get());
  if (status != JLP_OK) {
    return fail(jlp_run_error_message(run.get()), static_cast<int>(status));
  }

  const char* output = jlp_run_output(run.get());
  if (context.out_path.empty()) {
    std::fputs(output, stdout);
    return 0;
  }
  std::ofstream out(context.out_path, std::ios::binary);
  if (!out) return fail("cannot open output path '" + context.out_path + "'", 2);
  out << output;
  return out ? 0 : fail("failed writing '" + context.out_path + "'", 2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jeffreys-Lindley paradox toolkit"};
  app.set_version_flag("--version", std::string("jlp ") + jlp_version());
  app.require_subcommand(1);

  CommandContext table1;
  table1.app = app.add_subcommand(
      "table1", "Minimum sample sizes for strong-contrast conflict");
  bind(table1, "alpha", "comma-separated significance levels "
                        "(default 0.05,0.04,0.03,0.02,0.01,0.005)");
  bind(table1, "c", "prior mass on the null (default 0.5)");
  bind(table1, "tau", "conjugate prior scale (default 1)");
  bind(table1, "sigma", "sampling SD for the Lindley setup (default 1)");
  bind_common(table1);

  CommandContext figure1;
  figure1.app = app.add_subcommand(
      "figure1", "Posterior series against n (panel A) or tau (panel B)");
  bind(figure1, "panel", "A (growing n) or B (growing tau); default A");
  bind(figure1, "grid", "log-spaced grid lo:hi:count overriding the default");
  bind(figure1, "alpha", "significance level fixing z for panel A");
  bind(figure1, "z", "standardized statistic (panel B default 2.5)");
  bind(figure1, "n", "sample size for panel B (default 100)");
  bind(figure1, "c", "prior mass on the null (default 0.5)");
  bind(figure1, "tau", "prior scale for panel A (default 1)");
  bind(figure1, "quote-z", "use the two-decimal z quote instead of the "
                           "exact quantile (default false)");
  bind_common(figure1);

  CommandContext analyze;
  analyze.app = app.add_subcommand(
      "analyze", "Joint point-null and interval-null verdict for a scenario");
  bind(analyze, "n", "sample size (required)");
  bind(analyze, "z", "standardized statistic (default: just significant "
                     "at --alpha)");
  bind(analyze, "alpha", "test level (default 0.05)");
  bind(analyze, "sigma", "sampling SD (default 1)");
  bind(analyze, "theta0", "null value (default 0)");
  bind(analyze, "c", "prior mass on the null (default 0.5)");
  bind(analyze, "tau", "conjugate slab scale (default 1)");
  bind(analyze, "interval-width", "uniform slab width (replaces --tau)");
  bind(analyze, "delta", "equivalence half-width (required)");
  bind(analyze, "outer-bound", "H1 truncation (default 10*max(delta,sigma))");
  bind(analyze, "inside-prior", "uniform | normal:<scale> (default uniform)");
  bind(analyze, "outside-prior", "uniform | normal:<scale> (default uniform)");
  bind(analyze, "quote-z", "two-decimal z quote when deriving z from alpha");
  bind_common(analyze);

  CommandContext zone;
  zone.app = app.add_subcommand(
      "zone", "z band where the test rejects while the posterior supports H0");
  bind(zone, "n", "sample size (required)");
  bind(zone, "alpha", "significance level (default 0.05)");
  bind(zone, "tau", "conjugate prior scale (default 1)");
  bind(zone, "c", "prior mass on the null (default 0.5)");
  bind(zone, "threshold", "posterior support threshold (default 0.5)");
  bind_common(zone);

  CommandContext simulate;
  simulate.app = app.add_subcommand(
      "simulate", "Monte Carlo frequency of reject-while-support conflicts");
  bind(simulate, "n", "sample size (required)");
  bind(simulate, "alpha", "significance level (default 0.05)");
  bind(simulate, "tau", "conjugate prior scale (default 1)");
  bind(simulate, "c", "prior mass on the null (default 0.5)");
  bind(simulate, "truth", "null-true | mixture (default null-true)");
  bind(simulate, "reps", "replicates (default 100000)");
  bind(simulate, "seed", "RNG seed (default 1)");
  bind(simulate, "workers", "worker threads; the result is identical for "
                            "any count (default 1)");
  bind_common(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForVersion& version) {
    return app.exit(version);
  } catch (const CLI::ParseError& parse_error) {
    app.exit(parse_error);
    return 2;
  }

  for (const auto* context :
       {&table1, &figure1, &analyze, &zone, &simulate}) {
    if (context->app->parsed()) {
      return execute(context->app->get_name(), *context);
    }
  }
  std::cerr << "jlp: error: no command given\n";
  return 2;
}
