#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "agestruct_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace agestruct::cli;

  CLI::App app{"Age- and space-structured population simulator"};
  app.require_subcommand(1);

  CommandOptions options;
  std::string out;
  std::uint64_t seed = 0;
  double dt = 0.0;
  int threads = 0;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "Output directory (default: $AGESTRUCT_OUT or ./run)");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--dt", dt, "Time and age step")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 1024));
  };

  std::string config;
  auto* run = app.add_subcommand("run", "Solve one configuration");
  run->add_option("config", config, "Config file or gallery name")->required();
  add_common(run);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", suite,
                     "positivity | contraction | dependence | smoothing | convergence | "
                     "conservation | all")
      ->required();
  add_common(verify);

  std::string axis;
  auto* sweep = app.add_subcommand("sweep", "Solve a configuration across a parameter axis");
  sweep->add_option("config", config, "Config file or gallery name")->required();
  sweep->add_option("--axis", axis, "name=v1,v2,...")->required();
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  for (CLI::App* cmd : {run, verify, sweep}) {
    if (!cmd->parsed()) {
      continue;
    }
    if (cmd->count("--out") > 0) {
      options.out = out;
    }
    if (cmd->count("--seed") > 0) {
      options.seed = seed;
    }
    if (cmd->count("--dt") > 0) {
      options.dt = dt;
    }
    if (cmd->count("--threads") > 0) {
      options.threads = threads;
    }
  }

  if (run->parsed()) {
    return cmd_run(config, options, std::cerr);
  }
  if (verify->parsed()) {
    return cmd_verify(suite, options, std::cout);
  }
  return cmd_sweep(config, axis, options, std::cerr);
}
