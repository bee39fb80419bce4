#include "agestruct/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "agestruct/error.hpp"
#include "agestruct/report.hpp"
#include "sweep_kernel.hpp"

namespace agestruct {

void PicardWindow::validate() const {
  if (!(min_length > 0.0) || !(min_length <= length)) {
    throw std::invalid_argument("window needs 0 < min_length <= length");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("window tolerance must be positive");
  }
  if (max_iter < 2) {
    throw std::invalid_argument("window needs max_iter >= 2");
  }
  if (!(r_bound > 0.0)) {
    throw std::invalid_argument("trust radius must be positive");
  }
}

int SolverReport::total_iterations() const {
  int s = 0;
  for (const auto& w : windows) {
    s += w.iterations;
  }
  return s;
}

double SolverReport::max_tail_mass() const {
  double s = 0.0;
  for (const auto& w : windows) {
    s = std::max(s, w.tail_mass);
  }
  return s;
}

double SolverReport::max_ode_residual() const {
  double s = 0.0;
  for (const auto& w : windows) {
    s = std::max(s, w.ode_residual);
  }
  return s;
}

namespace {

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) {
      out += ", ";
    }
    out += format_real(values[k]);
  }
  return out;
}

}  // namespace

std::string SolverReport::to_text() const {
  std::string out = "[solver]\n";
  append_entry(out, "method", method);
  append_entry(out, "windows", static_cast<long long>(windows.size()));
  append_entry(out, "total_iterations", static_cast<long long>(total_iterations()));
  append_entry(out, "collapsed", collapsed ? "true" : "false");
  append_entry(out, "last_valid_time", last_valid_time);
  append_entry(out, "collapse_reason", collapse_reason.empty() ? "none" : collapse_reason);
  if (!times.empty()) {
    append_entry(out, "final_time", times.back());
    append_entry(out, "initial_population", population.front());
    append_entry(out, "final_population", population.back());
  }
  append_entry(out, "max_tail_mass", max_tail_mass());
  append_entry(out, "max_ode_residual", max_ode_residual());
  for (const auto& w : windows) {
    out += fmt::format("\n[window {}]\n", w.index);
    append_entry(out, "t_start", w.t_start);
    append_entry(out, "t_end", w.t_end);
    append_entry(out, "steps", static_cast<long long>(w.steps));
    append_entry(out, "iterations", static_cast<long long>(w.iterations));
    append_entry(out, "halvings", static_cast<long long>(w.halvings));
    append_entry(out, "differences", join(w.differences));
    append_entry(out, "ratios", join(w.ratios));
    append_entry(out, "final_ratio", w.final_ratio);
    append_entry(out, "solution_norm", w.solution_norm);
    append_entry(out, "tail_mass", w.tail_mass);
    append_entry(out, "ode_residual", w.ode_residual);
    append_entry(out, "holder_quotient", w.holder_quotient);
  }
  return out;
}

namespace {

struct Workspace {
  std::vector<double> g_nodes;
  std::vector<double> h_nodes;
};

Workspace make_workspace(const ModelSpec& model, const Grid& grid) {
  return {sample_ages(grid, model.weights.g), sample_ages(grid, model.weights.h)};
}

double tail_fraction(const AgeSpaceDensity& u, const std::vector<double>& g_nodes) {
  const Grid& grid = u.grid();
  const double total = total_mass(u, g_nodes);
  if (!(total > 0.0)) {
    return 0.0;
  }
  const std::size_t last = grid.n_age() - 1;
  const double tail = grid.age_weight(last) * g_nodes[last] *
                      spatial_integral(u.age_slice(last), grid.dx());
  return std::abs(tail) / total;
}

struct Attempt {
  bool accepted = false;
  std::string failure;
  std::vector<AgeSpaceDensity> path;
  std::vector<double> differences;
  std::vector<double> ratios;
  double solution_norm = 0.0;
};

Attempt attempt_window(const SolverState& state, const ModelSpec& model,
                       const PicardWindow& window, std::size_t steps, const Workspace& ws,
                       int threads) {
  Attempt a;
  std::vector<AgeSpaceDensity> prev(steps + 1, state.u);
  prev = detail::sweep(freeze_coefficients(prev, model, state.aux, state.t), state.u, threads);
  double e_prev = 0.0;
  int stagnant = 0;
  for (int k = 1; k <= window.max_iter; ++k) {
    std::vector<AgeSpaceDensity> next =
        detail::sweep(freeze_coefficients(prev, model, state.aux, state.t), state.u, threads);
    double e = 0.0;
    double norm = 0.0;
    bool finite = true;
    for (std::size_t n = 1; n <= steps; ++n) {
      if (!next[n].all_finite()) {
        finite = false;
        break;
      }
      e = std::max(e, weighted_distance(next[n], prev[n], ws.g_nodes, window.norm));
      norm = std::max(norm, weighted_norm(next[n], ws.g_nodes, window.norm));
    }
    if (!finite || !std::isfinite(e) || !std::isfinite(norm)) {
      a.failure = "non-finite iterate";
      return a;
    }
    if (norm > window.r_bound) {
      a.failure = "trust radius exceeded";
      return a;
    }
    a.differences.push_back(e);
    if (k > 1) {
      const double ratio = e_prev > 0.0 ? e / e_prev : (e > 0.0 ? INFINITY : 0.0);
      a.ratios.push_back(ratio);
      stagnant = ratio >= 1.0 ? stagnant + 1 : 0;
    }
    const double tol = std::max(window.tol, 1e-13 * norm);
    if (e < tol) {
      a.accepted = true;
      a.solution_norm = norm;
      a.path = std::move(next);
      return a;
    }
    if (stagnant >= 3) {
      a.failure = "non-contraction";
      return a;
    }
    prev = std::move(next);
    e_prev = e;
  }
  if (a.ratios.empty() || a.ratios.back() >= 1.0) {
    a.failure = "no contraction within max_iter";
    return a;
  }
  throw MaxIterExceeded(window.max_iter);
}

struct Accepted {
  std::vector<AgeSpaceDensity> path;
  FrozenCoefficients coeffs;
  WindowReport report;
};

Accepted solve_window(const SolverState& state, const ModelSpec& model,
                      const PicardWindow& window, std::size_t steps, const Workspace& ws,
                      int threads) {
  const double dt = state.u.grid().dt();
  std::size_t k = steps;
  int halvings = 0;
  std::string reason;
  while (true) {
    if (k == 0 || (halvings > 0 && static_cast<double>(k) * dt < window.min_length * (1 - 1e-12))) {
      throw WindowCollapse(state.t, reason + "; window below minimum length");
    }
    Attempt a = attempt_window(state, model, window, k, ws, threads);
    if (a.accepted) {
      Accepted acc;
      acc.coeffs = freeze_coefficients(a.path, model, state.aux, state.t);
      WindowReport& r = acc.report;
      r.t_start = state.t;
      r.t_end = detail::level_time(state.t, k, dt);
      r.steps = k;
      r.iterations = static_cast<int>(a.differences.size());
      r.differences = std::move(a.differences);
      r.ratios = std::move(a.ratios);
      r.final_ratio = r.ratios.empty() ? 0.0 : r.ratios.back();
      r.solution_norm = a.solution_norm;
      r.halvings = halvings;
      for (const auto& level : a.path) {
        r.tail_mass = std::max(r.tail_mass, tail_fraction(level, ws.g_nodes));
      }
      const ResidualReport res = residual_check(a.path, acc.coeffs);
      r.ode_residual = res.ode_residual;
      const double dx = state.u.grid().dx();
      for (std::size_t n = 0; n + 1 < acc.coeffs.ubar.size(); ++n) {
        std::vector<double> diff(acc.coeffs.ubar[n].size());
        for (std::size_t i = 0; i < diff.size(); ++i) {
          diff[i] = acc.coeffs.ubar[n + 1][i] - acc.coeffs.ubar[n][i];
        }
        r.holder_quotient = std::max(
            r.holder_quotient, spatial_norm(diff, dx, NormSpec{}) / std::pow(dt, window.theta));
      }
      acc.path = std::move(a.path);
      return acc;
    }
    reason = a.failure;
    k /= 2;
    ++halvings;
  }
}

class Recorder {
 public:
  Recorder(Solution& sol, const SolverOptions& options, const Workspace& ws, double dt)
      : sol_(sol), options_(options), ws_(ws), dt_(dt), taken_(options.snapshot_times.size(), false) {}

  void record(double t, const AgeSpaceDensity& u) {
    sol_.report.times.push_back(t);
    sol_.report.population.push_back(total_mass(u, ws_.h_nodes));
    if (options_.keep_path) {
      sol_.path.push_back({t, u});
    }
    for (std::size_t k = 0; k < taken_.size(); ++k) {
      if (!taken_[k] && std::abs(t - options_.snapshot_times[k]) <= 0.5 * dt_) {
        taken_[k] = true;
        sol_.snapshots.push_back({t, u});
      }
    }
    if (options_.observer) {
      options_.observer(t, u);
    }
  }

 private:
  Solution& sol_;
  const SolverOptions& options_;
  const Workspace& ws_;
  double dt_;
  std::vector<bool> taken_;
};

std::size_t steps_until(double t, double t_final, double dt) {
  const double remaining = (t_final - t) / dt;
  return remaining > 0.5 ? static_cast<std::size_t>(std::llround(remaining)) : 0;
}

}  // namespace

Solution picard_solve(const SolverState& state, const ModelSpec& model, const PicardWindow& window,
                      const SolverOptions& options) {
  window.validate();
  const Grid& grid = state.u.grid();
  const Workspace ws = make_workspace(model, grid);
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                  std::llround(window.length / grid.dt())));
  const auto start = std::chrono::steady_clock::now();
  Accepted acc = solve_window(state, model, window, steps, ws, options.threads);

  Solution sol{SolverState{acc.report.t_end, acc.path.back(), acc.coeffs.aux_end}, {}, {}, {}};
  sol.report.method = "picard";
  Recorder recorder(sol, options, ws, grid.dt());
  for (std::size_t n = 0; n < acc.path.size(); ++n) {
    recorder.record(detail::level_time(state.t, n, grid.dt()), acc.path[n]);
  }
  sol.report.windows.push_back(std::move(acc.report));
  sol.report.last_valid_time = sol.final_state.t;
  sol.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

Solution continue_solution(const SolverState& state, const ModelSpec& model,
                           const PicardWindow& window, double t_final,
                           const SolverOptions& options) {
  window.validate();
  const Grid& grid = state.u.grid();
  const double dt = grid.dt();
  const Workspace ws = make_workspace(model, grid);
  const auto start = std::chrono::steady_clock::now();
  const auto initial_steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window.length / dt)));

  Solution sol{state, {}, {}, {}};
  sol.report.method = "picard";
  Recorder recorder(sol, options, ws, dt);
  recorder.record(state.t, state.u);

  std::size_t current = initial_steps;
  int single_iteration_streak = 0;
  while (std::size_t remaining = steps_until(sol.final_state.t, t_final, dt)) {
    const std::size_t steps = std::min(current, remaining);
    Accepted acc;
    try {
      acc = solve_window(sol.final_state, model, window, steps, ws, options.threads);
    } catch (const WindowCollapse& e) {
      sol.report.collapsed = true;
      sol.report.collapse_reason = e.reason();
      break;
    }
    if (acc.report.halvings > 0) {
      current = acc.report.steps;
    }
    if (acc.report.iterations == 1) {
      if (++single_iteration_streak >= 2) {
        current = std::min(2 * current, initial_steps);
        single_iteration_streak = 0;
      }
    } else {
      single_iteration_streak = 0;
    }
    const double t0 = sol.final_state.t;
    for (std::size_t n = 1; n < acc.path.size(); ++n) {
      recorder.record(detail::level_time(t0, n, dt), acc.path[n]);
    }
    acc.report.index = sol.report.windows.size();
    sol.report.windows.push_back(std::move(acc.report));
    sol.final_state = SolverState{sol.report.windows.back().t_end, std::move(acc.path.back()),
                                  std::move(acc.coeffs.aux_end)};
  }
  sol.report.last_valid_time = sol.final_state.t;
  sol.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

Solution march_solve(const SolverState& state, const ModelSpec& model, double t_final,
                     double r_bound, const SolverOptions& options) {
  const Grid& grid = state.u.grid();
  const double dt = grid.dt();
  const Workspace ws = make_workspace(model, grid);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t steps = steps_until(state.t, t_final, dt);

  Solution sol{state, {}, {}, {}};
  sol.report.method = "march";
  Recorder recorder(sol, options, ws, dt);
  recorder.record(state.t, state.u);

  WindowReport w;
  w.t_start = state.t;
  w.steps = steps;
  w.iterations = 1;

  AgeSpaceDensity prev = state.u;
  AuxState aux = state.aux;
  SpatialField ubar = detail::total_population(prev, ws.h_nodes);
  std::vector<double> m_prev = detail::mortality_at_nodes(model, grid, state.t, ubar);
  AgeSpaceDensity next(grid);
  double t = state.t;
  for (std::size_t n = 1; n <= steps; ++n) {
    t = detail::level_time(state.t, n, dt);
    const ImplicitStepper stepper(detail::assemble_level(model, grid, ubar, aux), dt);
    AuxState aux_next = model.aux_advance ? model.aux_advance(aux, AuxContext{t, dt, prev, ubar}) : aux;
    const SpatialField birth = model.birth(BirthContext{t, prev, ubar, aux_next});
    const std::vector<double> m_next = detail::mortality_at_nodes(model, grid, t, ubar);
    detail::advance_characteristics(prev, stepper, m_prev, m_next, birth.values(), next,
                                    options.threads);
    const double norm = weighted_norm(next, ws.g_nodes, NormSpec{});
    if (!std::isfinite(norm) || norm > r_bound) {
      throw Blowup(t, norm);
    }
    w.solution_norm = std::max(w.solution_norm, norm);
    w.tail_mass = std::max(w.tail_mass, tail_fraction(next, ws.g_nodes));
    std::swap(prev, next);
    aux = std::move(aux_next);
    ubar = detail::total_population(prev, ws.h_nodes);
    m_prev = detail::mortality_at_nodes(model, grid, t, ubar);
    recorder.record(t, prev);
  }
  w.t_end = t;
  sol.report.windows.push_back(std::move(w));
  sol.final_state = SolverState{t, std::move(prev), std::move(aux)};
  sol.report.last_valid_time = t;
  sol.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace agestruct
