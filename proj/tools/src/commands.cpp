#include "agestruct_cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "agestruct/error.hpp"
#include "agestruct/report.hpp"
#include "agestruct_cli/scenario.hpp"
#include "agestruct_cli/suites.hpp"

namespace agestruct::cli {

std::filesystem::path output_dir(const CommandOptions& options) {
  if (options.out) {
    return *options.out;
  }
  if (const char* env = std::getenv("AGESTRUCT_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return "run";
}

Overrides command_overrides(const CommandOptions& options) {
  Overrides o;
  if (options.seed) {
    o.emplace_back("run.seed", std::to_string(*options.seed));
  }
  if (options.dt) {
    o.emplace_back("run.dt", format_real(*options.dt));
  }
  if (options.threads) {
    o.emplace_back("run.threads", std::to_string(*options.threads));
  }
  return o;
}

namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw OutputError("cannot write " + path.string());
  }
}

std::string run_header(const std::string& source, const Config& c, const Scenario& s) {
  std::string out = "[run]\n";
  append_entry(out, "config", source);
  append_entry(out, "model", c.run.model);
  append_entry(out, "t_final", c.run.t_final);
  append_entry(out, "dt", c.run.dt);
  append_entry(out, "a_max", c.run.a_max);
  append_entry(out, "n_age", static_cast<long long>(s.grid.n_age()));
  append_entry(out, "length", c.run.length);
  append_entry(out, "n_x", static_cast<long long>(c.run.n_x));
  append_entry(out, "seed", static_cast<long long>(c.run.seed));
  append_entry(out, "window_length", c.window.length);
  append_entry(out, "window_tol", c.window.tol);
  append_entry(out, "r_bound", c.window.r_bound);
  return out;
}

void write_outputs(const std::filesystem::path& dir, const std::string& header,
                   const Scenario& s, const Solution& sol) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw OutputError("cannot create " + dir.string() + ": " + ec.message());
  }
  std::string report = header;
  report += "\n[validation]\n" + s.validation.to_text();
  report += "\n" + sol.report.to_text();
  write_file(dir / "report.txt", report);

  std::string pop = "t,P\n";
  for (std::size_t k = 0; k < sol.report.times.size(); ++k) {
    pop += fmt::format("{},{}\n", format_real(sol.report.times[k]),
                       format_real(sol.report.population[k]));
  }
  write_file(dir / "population.csv", pop);

  std::string diag = "window,t_start,t_end,iterations,ratio,tail_mass,ode_residual\n";
  for (const auto& w : sol.report.windows) {
    diag += fmt::format("{},{},{},{},{},{},{}\n", w.index, format_real(w.t_start),
                        format_real(w.t_end), w.iterations, format_real(w.final_ratio),
                        format_real(w.tail_mass), format_real(w.ode_residual));
  }
  write_file(dir / "diagnostics.csv", diag);

  for (const auto& snap : sol.snapshots) {
    std::ostringstream csv;
    write_density_csv(csv, snap.u);
    write_file(dir / fmt::format("u_t{:g}.csv", snap.t), csv.str());
  }
}

struct RunOutcome {
  int code = exit_ok;
  double final_population = 0.0;
  bool collapsed = false;
  double last_time = 0.0;
  std::string message;
};

// Solves one configuration; outputs are written when dir is set.
RunOutcome execute(const std::string& source, const Overrides& overrides,
                   const std::filesystem::path* dir) {
  RunOutcome r;
  try {
    const Config config = load_config(source, overrides);
    const Scenario s = build_scenario(config);
    const Solution sol =
        continue_solution(s.initial, s.model, s.window, s.t_final, s.options);
    r.final_population = sol.report.population.empty() ? 0.0 : sol.report.population.back();
    r.collapsed = sol.report.collapsed;
    r.last_time = sol.report.last_valid_time;
    if (dir != nullptr) {
      write_outputs(*dir, run_header(source, config, s), s, sol);
    }
    if (r.collapsed) {
      r.code = exit_collapse;
      r.message = fmt::format("window collapse after t = {}: {}", format_real(r.last_time),
                              sol.report.collapse_reason);
    } else {
      r.message = fmt::format("completed t = {} in {} windows", format_real(r.last_time),
                              sol.report.windows.size());
    }
  } catch (const ConfigError& e) {
    r = {exit_config, 0.0, false, 0.0, std::string("config error: ") + e.what()};
  } catch (const HypothesisViolation& e) {
    r = {exit_hypothesis, 0.0, false, 0.0, e.what()};
  } catch (const EllipticityViolation& e) {
    r = {exit_hypothesis, 0.0, false, 0.0, e.what()};
  } catch (const WeightViolation& e) {
    r = {exit_hypothesis, 0.0, false, 0.0, e.what()};
  } catch (const MaxIterExceeded& e) {
    r = {exit_collapse, 0.0, true, 0.0, e.what()};
  } catch (const Blowup& e) {
    r = {exit_collapse, 0.0, true, e.time(), e.what()};
  } catch (const WindowCollapse& e) {
    r = {exit_collapse, 0.0, true, e.last_valid_time(), e.what()};
  } catch (const OutputError& e) {
    r = {exit_internal, 0.0, false, 0.0, e.what()};
  } catch (const std::exception& e) {
    r = {exit_internal, 0.0, false, 0.0, std::string("internal error: ") + e.what()};
  }
  return r;
}

std::string resolve_alias(const std::string& name, const std::string& model) {
  if (name.find('.') != std::string::npos) {
    return name;
  }
  if (name == "beta" || name == "k") {
    return "birth." + name;
  }
  if (name == "tau") {
    return model == "proteus" ? "proteus.tau" : "delay.tau";
  }
  if (name == "d0" || name == "c") {
    return "diffusion." + name;
  }
  if (name == "m0") {
    return "mortality.m0";
  }
  throw ConfigError("unknown sweep axis '" + name + "'");
}

}  // namespace

int cmd_run(const std::string& config, const CommandOptions& options, std::ostream& log) {
  const std::filesystem::path dir = output_dir(options);
  const RunOutcome r = execute(config, command_overrides(options), &dir);
  log << r.message << '\n';
  return r.code;
}

int cmd_verify(const std::string& suite, const CommandOptions& options, std::ostream& out) {
  const std::uint64_t seed = options.seed.value_or(7);
  const int threads = options.threads.value_or(1);
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else {
    names.push_back(suite);
  }
  bool ok = true;
  for (const auto& name : names) {
    SuiteResult result;
    try {
      result = run_suite(name, seed, threads);
    } catch (const ConfigError& e) {
      out << e.what() << '\n';
      return exit_config;
    } catch (const std::exception& e) {
      out << name << ": " << e.what() << '\n';
      return exit_verify;
    }
    out << result.to_table();
    ok = ok && result.passed();
  }
  return ok ? exit_ok : exit_verify;
}

int cmd_sweep(const std::string& config, const std::string& axis, const CommandOptions& options,
              std::ostream& log) {
  std::string key;
  std::vector<std::string> values;
  Config base;
  const Overrides overrides = command_overrides(options);
  try {
    const auto eq = axis.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("axis must have the form name=v1,v2,...");
    }
    base = load_config(config, overrides);
    key = resolve_alias(axis.substr(0, eq), base.run.model);
    std::stringstream ss(axis.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) {
        values.push_back(item);
      }
    }
    if (values.empty()) {
      throw ConfigError("sweep axis '" + axis + "' has no values");
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  }

  const int concurrency = options.threads.value_or(base.run.threads);
  std::vector<RunOutcome> outcomes(values.size());
  const auto n = static_cast<long>(values.size());
#pragma omp parallel for num_threads(concurrency) schedule(dynamic) if (concurrency > 1)
  for (long k = 0; k < n; ++k) {
    Overrides o = overrides;
    o.emplace_back("run.threads", "1");
    o.emplace_back(key, values[static_cast<std::size_t>(k)]);
    outcomes[static_cast<std::size_t>(k)] = execute(config, o, nullptr);
  }

  std::string csv = "param,final_P,collapsed,last_t\n";
  int code = exit_ok;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const RunOutcome& r = outcomes[k];
    log << key << " = " << values[k] << ": " << r.message << '\n';
    csv += fmt::format("{},{},{},{}\n", values[k], format_real(r.final_population),
                       r.collapsed ? "true" : "false", format_real(r.last_time));
    const bool fine = r.code == exit_ok || (r.code == exit_collapse && base.sweep.expect_collapse);
    if (!fine && code == exit_ok) {
      code = r.code;
    }
  }
  try {
    const std::filesystem::path dir = output_dir(options);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw OutputError("cannot create " + dir.string() + ": " + ec.message());
    }
    write_file(dir / "sweep.csv", csv);
  } catch (const OutputError& e) {
    log << e.what() << '\n';
    return exit_internal;
  }
  return code;
}

}  // namespace agestruct::cli
