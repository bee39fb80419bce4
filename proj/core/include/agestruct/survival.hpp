#pragma once

#include <cmath>
#include <span>

#include "agestruct/grid.hpp"
#include "agestruct/model.hpp"

namespace agestruct {

// exp(-int m) along the characteristic through (t, a), trapezoid rule at the
// lattice points. For a <= t the path starts at (t - a, 0), otherwise at
// (0, a - t). ubar_path[n] is the total population at t_n = n dt; m sees its
// spatial mean.
double survival_factor(const MortalityLaw& m, double t, double a,
                       std::span<const SpatialField> ubar_path, double dt, double dx);

// One-step factor exp(-dt (m_prev + m_next) / 2).
inline double step_survival(double dt, double m_prev, double m_next) {
  return std::exp(-0.5 * dt * (m_prev + m_next));
}

}  // namespace agestruct
