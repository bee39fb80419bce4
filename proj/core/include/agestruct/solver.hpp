#pragma once

#include <functional>
#include <string>
#include <vector>

#include "agestruct/evolution.hpp"
#include "agestruct/grid.hpp"
#include "agestruct/model.hpp"
#include "agestruct/norms.hpp"

namespace agestruct {

struct PicardWindow {
  double length = 0.1;
  double tol = 1e-10;
  int max_iter = 50;
  double min_length = 1e-4;
  // Trust radius for the weighted solution norm.
  double r_bound = 1e8;
  // Hoelder exponent monitored for the total population path.
  double theta = 0.5;
  NormSpec norm;

  // Throws std::invalid_argument unless 0 < min_length <= length, tol > 0,
  // max_iter >= 2, r_bound > 0.
  void validate() const;
};

struct SolverState {
  double t;
  AgeSpaceDensity u;
  AuxState aux;
};

struct TimeLevel {
  double t;
  AgeSpaceDensity u;
};

struct SolverOptions {
  int threads = 1;
  // Keep every accepted time level (memory heavy).
  bool keep_path = false;
  std::vector<double> snapshot_times;
  // Called for every accepted time level, including the initial one.
  std::function<void(double, const AgeSpaceDensity&)> observer;
};

struct WindowReport {
  std::size_t index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t steps = 0;
  // Number of successive differences computed.
  int iterations = 0;
  std::vector<double> differences;
  std::vector<double> ratios;
  double final_ratio = 0.0;
  // sup over the window of the weighted solution norm.
  double solution_norm = 0.0;
  // Largest relative g-weighted mass on the last age node.
  double tail_mass = 0.0;
  double ode_residual = 0.0;
  // max_n ||ubar_{n+1} - ubar_n||_2 / dt^theta
  double holder_quotient = 0.0;
  int halvings = 0;
};

struct SolverReport {
  std::string method;
  std::vector<WindowReport> windows;
  std::vector<double> times;
  // Weighted total population int int u h da dx at each accepted level.
  std::vector<double> population;
  bool collapsed = false;
  double last_valid_time = 0.0;
  std::string collapse_reason;
  // Excluded from to_text so reports stay reproducible.
  double wall_seconds = 0.0;

  int total_iterations() const;
  double max_tail_mass() const;
  double max_ode_residual() const;
  // key = value lines, one section per window.
  std::string to_text() const;
};

struct Solution {
  SolverState final_state;
  std::vector<TimeLevel> path;
  std::vector<TimeLevel> snapshots;
  SolverReport report;
};

// Coefficients of one window frozen from a path: total population, birth
// values, mortality at the age nodes (per level) and the evolution path of
// the operators at the left endpoints.
struct FrozenCoefficients {
  double t_start = 0.0;
  std::vector<SpatialField> ubar;
  std::vector<SpatialField> birth;
  std::vector<std::vector<double>> mortality;
  EvolutionPath path;
  // Auxiliary state at the last level.
  AuxState aux_end;
};

FrozenCoefficients freeze_coefficients(const std::vector<AgeSpaceDensity>& path,
                                       const ModelSpec& model, const AuxState& aux_start,
                                       double t_start);

// The Theta map: node (t_n, a_j) receives the birth value at t_n - a_j (or the
// start slice at a_j - t_n) carried along the characteristic through the
// evolution path and the survival factors, all frozen from guess.
// guess[0] is the start slice.
std::vector<AgeSpaceDensity> theta_sweep(const std::vector<AgeSpaceDensity>& guess,
                                         const ModelSpec& model, const AuxState& aux_start,
                                         double t_start, int threads = 1);

// One Picard window from state, starting from the constant extension of the
// start slice. Halves the window on stagnation and returns the accepted
// (possibly shorter) window with its levels in path.
// Throws WindowCollapse or MaxIterExceeded.
Solution picard_solve(const SolverState& state, const ModelSpec& model, const PicardWindow& window,
                      const SolverOptions& options = {});

// Windows of Picard solves until t_final; a collapse is recorded in the
// report rather than thrown.
Solution continue_solution(const SolverState& state, const ModelSpec& model,
                           const PicardWindow& window, double t_final,
                           const SolverOptions& options = {});

// Single forward sweep with coefficients lagged by one level.
// Throws Blowup when the weighted norm exceeds r_bound.
Solution march_solve(const SolverState& state, const ModelSpec& model, double t_final,
                     double r_bound = 1e8, const SolverOptions& options = {});

struct ResidualReport {
  // max_n sup_x |dP/dt + A_n P_n - B_n + L_n + Out_n/dt| for P = int u da.
  double ode_residual = 0.0;
  // sup of the characteristic difference residual off the diagonal a = t.
  double pointwise_residual = 0.0;
  // max_n |P_n - P_0| / P_0 for the plain mass.
  double population_drift = 0.0;
  std::size_t levels = 0;
};

// path[n] is the level at t_start + n dt; aux_start the auxiliary state there.
ResidualReport residual_check(const std::vector<AgeSpaceDensity>& path, const ModelSpec& model,
                              const AuxState& aux_start, double t_start);

ResidualReport residual_check(const std::vector<AgeSpaceDensity>& path,
                              const FrozenCoefficients& coeffs);

}  // namespace agestruct
