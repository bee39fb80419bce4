#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "agestruct_cli/config.hpp"

namespace agestruct::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 1,
  // Hypothesis, ellipticity or weight violation.
  exit_hypothesis = 2,
  // Window collapse, trust radius or iteration cap.
  exit_collapse = 3,
  exit_verify = 4,
  exit_internal = 5,
};

struct CommandOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<int> threads;
};

// --out, then AGESTRUCT_OUT, then "run".
std::filesystem::path output_dir(const CommandOptions& options);

Overrides command_overrides(const CommandOptions& options);

// Writes report.txt, population.csv, diagnostics.csv and u_t<t>.csv.
int cmd_run(const std::string& config, const CommandOptions& options, std::ostream& log);

// positivity | contraction | dependence | smoothing | convergence | conservation | all
int cmd_verify(const std::string& suite, const CommandOptions& options, std::ostream& out);

// axis = "name=v1,v2,..."; name is section.key or one of beta, k, tau, d0, c, m0.
// Writes sweep.csv with one row per value in axis order.
int cmd_sweep(const std::string& config, const std::string& axis, const CommandOptions& options,
              std::ostream& log);

}  // namespace agestruct::cli
