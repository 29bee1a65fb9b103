#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pandemic/cli.hpp"

int main(int argc, char** argv) {
  using pandemic::cli::ReportFormat;

  CLI::App app{"Pandemic decision games and policy evaluation"};
  app.require_subcommand(1);

  pandemic::cli::RunOptions options;
  std::string format = "table";
  long long grid_steps = 0;

  for (const auto& name : pandemic::cli::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--scenario", options.scenario_path, "Scenario file")->required();
    sub->add_option("--out", options.out_path, "Output path (default stdout)");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"table", "csv"}));
    sub->add_option("--grid-steps", grid_steps, "Override [meeting].grid_steps");
    sub->add_flag("--verify", options.verify, "Cross-check analytic results against brute-force oracles");
    sub->add_option("--precision", options.precision, "Decimals (table) or significant digits (csv)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  options.command = app.get_subcommands().front()->get_name();
  options.format = format == "csv" ? ReportFormat::csv : ReportFormat::table;
  if (app.get_subcommands().front()->count("--grid-steps")) options.grid_steps = grid_steps;
  return pandemic::cli::run(options, std::cout, std::cerr);
}
