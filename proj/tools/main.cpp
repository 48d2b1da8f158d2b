#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "sdmortar/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mortar MAC / mixed finite element solver for coupled Stokes-Darcy flow"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "solve a case and write tables, fields and a summary");

  std::string config;
  std::map<std::string, std::string> flags;
  const std::vector<std::pair<std::string, std::string>> options{
      {"case", "case1, case2 or custom"},
      {"refinements", "number of uniform refinements (0-7)"},
      {"mortar", "p0 or p1"},
      {"mortar-elements", "mortar elements on the coarsest level (custom case)"},
      {"solver", "monolithic or dd"},
      {"norms", "standard, midpoint or both"},
      {"cg-tol", "relative residual tolerance of the interface CG"},
      {"cg-max-iter", "iteration cap of the interface CG"},
      {"output-dir", "directory for CSV, VTK and summary files"},
  };
  for (const auto& [name, help] : options) run->add_option("--" + name, flags[name], help);
  run->add_option("--config", config, "key = value file; command-line flags take precedence");

  CLI11_PARSE(app, argc, argv);

  try {
    sdm::RunConfig cfg;
    if (!config.empty()) cfg = sdm::read_config_file(config, cfg);
    for (const auto& [name, help] : options)
      if (run->count("--" + name) > 0) sdm::apply_setting(cfg, name, flags[name]);
    const sdm::RunResult res = sdm::run(cfg, &std::cout);
    for (const auto& f : res.files) std::cout << "wrote " << f << '\n';
  } catch (const sdm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
