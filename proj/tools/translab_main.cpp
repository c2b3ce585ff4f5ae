// Command line front end: each subcommand reads a JSON experiment config and
// writes its reports into the chosen output directory.

#include <CLI11.hpp>
#include <iostream>

#include "translab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"translate-dictionary experiments"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* help;
  };
  static constexpr SubSpec kSubs[] = {
      {"classify", "divergence diagnostics for a translation set"},
      {"approx", "completeness sweep and annihilator probing"},
      {"reduce", "shift reduction convergence table"},
      {"polys", "exact coefficient polynomial family listing"},
  };

  std::string config_path;
  std::string out_dir = ".";
  std::string chosen;
  for (const SubSpec& spec : kSubs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    sub->callback([&chosen, name = std::string(spec.name)] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return translab::run_config_file(config_path, chosen, out_dir, std::cout);
}
