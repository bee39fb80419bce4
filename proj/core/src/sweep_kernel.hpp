#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "agestruct/elliptic.hpp"
#include "agestruct/grid.hpp"
#include "agestruct/model.hpp"
#include "agestruct/solver.hpp"

namespace agestruct::detail {

// Time of level n counted from t_start, snapped to the dt lattice when
// t_start lies on it so that window splits do not change the times.
inline double level_time(double t_start, std::size_t n, double dt) {
  const double k = std::round(t_start / dt);
  if (std::abs(t_start - k * dt) <= 1e-9 * dt) {
    return (k + static_cast<double>(n)) * dt;
  }
  return t_start + static_cast<double>(n) * dt;
}

// next[0] = birth; next[j] = s_j * S prev[j-1] with
// s_j = exp(-dt (m_prev[j-1] + m_next[j]) / 2).
void advance_characteristics(const AgeSpaceDensity& prev, const ImplicitStepper& step,
                             std::span<const double> m_prev, std::span<const double> m_next,
                             std::span<const double> birth, AgeSpaceDensity& next, int threads);

std::vector<double> mortality_at_nodes(const ModelSpec& model, const Grid& grid, double t,
                                       const SpatialField& ubar);

FrozenEllipticOperator assemble_level(const ModelSpec& model, const Grid& grid,
                                      const SpatialField& ubar, const AuxState& aux);

SpatialField total_population(const AgeSpaceDensity& u, std::span<const double> h_nodes);

// Theta applied with frozen coefficients; out[0] = start.
std::vector<AgeSpaceDensity> sweep(const FrozenCoefficients& c, const AgeSpaceDensity& start,
                                   int threads);

}  // namespace agestruct::detail
