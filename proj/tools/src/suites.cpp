#include "agestruct_cli/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "agestruct/evolution.hpp"
#include "agestruct/norms.hpp"
#include "agestruct/oracle.hpp"
#include "agestruct/solver.hpp"
#include "agestruct_cli/config.hpp"
#include "agestruct_cli/scenario.hpp"

namespace agestruct::cli {

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
}

std::string SuiteResult::to_table() const {
  std::string out;
  for (const auto& c : checks) {
    out += fmt::format("{:<12} {:<36} {:<4} value={:<14.6g} {}\n", suite, c.name,
                       c.passed ? "PASS" : "FAIL", c.value, c.criterion);
  }
  return out;
}

namespace {

const char* const kGalleryModels[] = {"delay_birth_default", "haptotaxis_default",
                                      "proteus_default"};

Config gallery(const std::string& name) { return parse_config_text(gallery_text(name)); }

std::vector<double> g_nodes(const Scenario& s) { return sample_ages(s.grid, s.model.weights.g); }

// sup over shared levels of the g-weighted distance.
double path_distance(const std::vector<TimeLevel>& a, const std::vector<TimeLevel>& b,
                     const std::vector<double>& g) {
  double d = 0.0;
  for (std::size_t n = 0; n < std::min(a.size(), b.size()); ++n) {
    d = std::max(d, weighted_distance(a[n].u, b[n].u, g, NormSpec{}));
  }
  return d;
}

}  // namespace

SuiteResult verify_positivity(int runs_per_model, std::uint64_t seed) {
  SuiteResult r{"positivity", {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const char* const profiles[] = {"constant", "parabola", "smooth", "exponential"};
  double worst = std::numeric_limits<double>::infinity();
  int collapsed = 0;
  int runs = 0;
  for (const char* name : kGalleryModels) {
    for (int k = 0; k < runs_per_model; ++k) {
      Config c = gallery(name);
      c.run.t_final = 0.5;
      c.run.snapshots.clear();
      c.run.seed = rng();
      c.initial.profile = profiles[rng() % 4];
      c.initial.width = 0.5 + 3.5 * unit(rng);
      c.initial.amplitude = 0.1 + 1.9 * unit(rng);
      c.initial.x_mod = -0.9 + 1.8 * unit(rng);
      c.initial.noise = unit(rng);
      Scenario s = build_scenario(c);
      double run_min = std::numeric_limits<double>::infinity();
      s.options.observer = [&run_min](double, const AgeSpaceDensity& u) {
        run_min = std::min(run_min, u.min_value());
      };
      const Solution sol = continue_solution(s.initial, s.model, s.window, s.t_final, s.options);
      worst = std::min(worst, run_min);
      collapsed += sol.report.collapsed ? 1 : 0;
      ++runs;
    }
  }
  r.checks.push_back({fmt::format("min over {} runs", runs), worst, ">= -1e-12", worst >= -1e-12});
  r.checks.push_back({"collapsed runs", static_cast<double>(collapsed), "== 0", collapsed == 0});
  return r;
}

SuiteResult verify_contraction(int threads) {
  SuiteResult r{"contraction", {}};
  {
    Config c = gallery("delay_birth_default");
    c.run.t_final = 2.0;
    c.run.snapshots.clear();
    c.run.threads = threads;
    const Scenario s = build_scenario(c);
    const Solution sol = continue_solution(s.initial, s.model, s.window, s.t_final, s.options);
    double worst = 0.0;
    for (const auto& w : sol.report.windows) {
      worst = std::max(worst, w.final_ratio);
    }
    r.checks.push_back({"nonlinear final ratio", worst, "< 1", worst < 1.0});
    r.checks.push_back({"nonlinear reached t_final", sol.report.last_valid_time, "== 2",
                        !sol.report.collapsed});
  }
  {
    Config c = gallery("linear_default");
    c.run.snapshots.clear();
    c.run.threads = threads;
    const Scenario s = build_scenario(c);
    const Solution sol = continue_solution(s.initial, s.model, s.window, s.t_final, s.options);
    int most = 0;
    for (const auto& w : sol.report.windows) {
      most = std::max(most, w.iterations);
    }
    r.checks.push_back({"linear iterations per window", static_cast<double>(most), "== 1",
                        most == 1 && !sol.report.collapsed});

    const std::size_t steps =
        static_cast<std::size_t>(std::llround(s.window.length / s.grid.dt()));
    const std::vector<AgeSpaceDensity> guess(steps + 1, s.initial.u);
    const auto first = theta_sweep(guess, s.model, s.initial.aux, 0.0, threads);
    const auto second = theta_sweep(first, s.model, s.initial.aux, 0.0, threads);
    const std::vector<double> g = g_nodes(s);
    double d = 0.0;
    for (std::size_t n = 0; n <= steps; ++n) {
      d = std::max(d, weighted_distance(first[n], second[n], g, NormSpec{}));
    }
    r.checks.push_back({"linear second sweep distance", d, "<= 1e-12", d <= 1e-12});
  }
  return r;
}

SuiteResult verify_dependence(int threads) {
  SuiteResult r{"dependence", {}};
  Config c = gallery("delay_birth_default");
  c.run.t_final = 0.5;
  c.run.snapshots.clear();
  c.run.threads = threads;
  const Scenario base = build_scenario(c);
  const std::vector<double> g = g_nodes(base);

  auto solve = [&](double delta) {
    Scenario s = base;
    const Grid& grid = s.grid;
    for (std::size_t j = 0; j < grid.n_age(); ++j) {
      const double a = grid.age(j);
      const double pa = a < 3.0 ? std::pow(std::sin(std::numbers::pi * a / 3.0), 2) : 0.0;
      for (std::size_t i = 0; i < grid.n_x(); ++i) {
        s.initial.u(j, i) += delta * pa * (1.0 + 0.5 * std::sin(std::numbers::pi * grid.x(i)));
      }
    }
    s.options.keep_path = true;
    return continue_solution(s.initial, s.model, s.window, s.t_final, s.options);
  };
  const Solution ref = solve(0.0);
  const Solution coarse = solve(1e-2);
  const Solution fine = solve(1e-3);
  const double d_coarse = path_distance(ref.path, coarse.path, g);
  const double d_fine = path_distance(ref.path, fine.path, g);
  const double ratio = d_fine > 0.0 ? d_coarse / d_fine : 0.0;
  r.checks.push_back({"response at delta 1e-2", d_coarse, "> 0", d_coarse > 0.0});
  r.checks.push_back({"response at delta 1e-3", d_fine, "> 0", d_fine > 0.0});
  r.checks.push_back({"response ratio", ratio, "in [8, 12]", ratio >= 8.0 && ratio <= 12.0});
  return r;
}

SuiteResult verify_smoothing(std::uint64_t seed) {
  SuiteResult r{"smoothing", {}};
  double h1[2] = {0.0, 0.0};
  double l2 = 0.0;
  const std::size_t sizes[2] = {64, 128};
  for (int k = 0; k < 2; ++k) {
    const double dt = 1e-3;
    const Grid grid = Grid::from_step(1.0, 1.0, sizes[k], dt, 0.02);
    const FrozenEllipticOperator op =
        assemble_operator(SpatialField(grid.n_x()), DiffusionLaw::constant(1.0), grid);
    const EvolutionPath path(std::vector<FrozenEllipticOperator>(20, op), dt);
    const ProbeReport probe = smoothing_probe(path, NormSpec{}, seed);
    h1[k] = probe.h1_smoothing;
    l2 = std::max(l2, probe.l2_bound);
    r.checks.push_back({fmt::format("h1 smoothing n_x={}", sizes[k]), h1[k], "reported", true});
  }
  const double ratio = std::max(h1[0], h1[1]) / std::min(h1[0], h1[1]);
  r.checks.push_back({"refinement ratio", ratio, "< 1.5", ratio < 1.5});
  r.checks.push_back({"l2 bound", l2, "<= 1 + 1e-12", l2 <= 1.0 + 1e-12});
  return r;
}

namespace {

// Final slice restricted to the coarse age lattice of refinement 0.
std::vector<double> coarse_final(const Config& base, int refinement, int threads) {
  Config c = base;
  c.run.dt = base.run.dt / std::pow(2.0, refinement);
  c.run.snapshots.clear();
  c.run.threads = threads;
  const Scenario s = build_scenario(c);
  const Solution sol = continue_solution(s.initial, s.model, s.window, s.t_final, s.options);
  const AgeSpaceDensity& u = sol.final_state.u;
  const std::size_t stride = std::size_t{1} << refinement;
  std::vector<double> out;
  for (std::size_t j = 0; j < u.n_age(); j += stride) {
    const auto slice = u.age_slice(j);
    out.insert(out.end(), slice.begin(), slice.end());
  }
  return out;
}

}  // namespace

SuiteResult verify_convergence(int threads) {
  SuiteResult r{"convergence", {}};
  {
    Config c = gallery("linear_default");
    c.run.t_final = 1.0;
    c.run.dt = 0.02;
    c.run.a_max = 6.0;
    c.run.n_x = 17;
    const auto res = oracle::self_convergence(
        [&](int level) { return coarse_final(c, level, threads); });
    r.checks.push_back({"linear order", res.order, "in [0.8, 1.2]",
                        !res.degenerate && res.order >= 0.8 && res.order <= 1.2});
  }
  {
    Config c;
    c.run.model = "linear";
    c.run.t_final = 1.0;
    c.run.dt = 0.02;
    c.run.a_max = 8.0;
    c.run.n_x = 9;
    c.window.length = 0.2;
    c.diffusion.d0 = 1.0;
    c.mortality.m0 = 0.1;
    c.initial.profile = "smooth";
    c.initial.width = 5.0;
    const auto res = oracle::self_convergence(
        [&](int level) { return coarse_final(c, level, threads); });
    r.checks.push_back({"transport coarse difference", res.coarse_difference, "<= 1e-12",
                        res.degenerate && res.coarse_difference <= 1e-12});
  }
  return r;
}

SuiteResult verify_conservation(int threads) {
  SuiteResult r{"conservation", {}};
  Config c;
  c.run.model = "renewal";
  c.run.t_final = 1.0;
  c.run.dt = 0.01;
  c.run.a_max = 6.0;
  c.run.n_x = 33;
  c.run.threads = threads;
  c.diffusion.law = "quadratic";
  c.diffusion.d0 = 1.0;
  c.diffusion.c = 1.0;
  c.birth.response = "constant";
  c.birth.beta = 0.0;
  c.initial.profile = "smooth";
  c.initial.width = 3.0;
  c.initial.x_mod = 0.5;
  const Scenario s = build_scenario(c);
  const Solution sol = continue_solution(s.initial, s.model, s.window, s.t_final, s.options);
  const double p0 = sol.report.population.front();
  double drift = 0.0;
  for (double p : sol.report.population) {
    drift = std::max(drift, std::abs(p - p0) / p0);
  }
  r.checks.push_back({"relative population drift", drift, "<= 1e-12", drift <= 1e-12});
  r.checks.push_back({"reached t_final", sol.report.last_valid_time, "== 1",
                      !sol.report.collapsed});
  return r;
}

std::vector<std::string> suite_names() {
  return {"positivity", "contraction", "dependence", "smoothing", "convergence", "conservation"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, int threads) {
  if (name == "positivity") {
    return verify_positivity(4, seed);
  }
  if (name == "contraction") {
    return verify_contraction(threads);
  }
  if (name == "dependence") {
    return verify_dependence(threads);
  }
  if (name == "smoothing") {
    return verify_smoothing(seed);
  }
  if (name == "convergence") {
    return verify_convergence(threads);
  }
  if (name == "conservation") {
    return verify_conservation(threads);
  }
  throw ConfigError("unknown suite '" + name + "'");
}

}  // namespace agestruct::cli
