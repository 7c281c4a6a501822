#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iclt/cli/run.hpp"

using namespace iclt::cli;

int main(int argc, char** argv) {
  CLI::App app{"Iterates of inner functions: exact identities and limit-law experiments"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", format;
  std::uint64_t seed = 0;
  std::size_t grid = 0, mc = 0;
  int threads = 0;

  const char* commands[][2] = {
      {"verify", "exact-identity suite (Clark measures and correlations); nonzero exit on any FAIL"},
      {"clt", "partial-sum limit law experiment"},
      {"tails", "tail-sum limit law experiment"},
      {"blocks", "block decomposition and its integer inequalities"},
      {"clark", "Clark measure atoms and weights"},
      {"correlations", "correlation identities and decay fits for one product"},
      {"optimality", "geometric coefficients violating the growth condition (expected failure)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "config file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "seed (overrides the config)");
    sub->add_option("--grid", grid, "equispaced grid size for sampling, quadrature cap otherwise")
        ->check(CLI::PositiveNumber);
    sub->add_option("--mc-samples", mc, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  Overrides o;
  if (sub->count("--seed")) o.seed = seed;
  if (sub->count("--grid")) o.grid = grid;
  if (sub->count("--mc-samples")) o.mc_samples = mc;
  if (sub->count("--threads")) o.threads = threads;
  if (sub->count("--format")) o.format = format == "json" ? Format::Json : Format::Csv;
  return execute(*parse_command(sub->get_name()), config_path, o, out_dir, std::cout, std::cerr);
}
