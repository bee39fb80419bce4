#include "agestruct/survival.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agestruct/norms.hpp"

namespace agestruct {

double survival_factor(const MortalityLaw& m, double t, double a,
                       std::span<const SpatialField> ubar_path, double dt, double dx) {
  const double span = std::min(t, a);
  const auto steps = static_cast<std::size_t>(std::llround(span / dt));
  const auto n_end = static_cast<std::size_t>(std::llround(t / dt));
  if (std::abs(static_cast<double>(steps) * dt - span) > 1e-9 * std::max(1.0, span) ||
      n_end >= ubar_path.size()) {
    throw std::invalid_argument("characteristic is not on the lattice of the supplied path");
  }
  double integral = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const std::size_t n = n_end - steps + k;
    const double tk = static_cast<double>(n) * dt;
    const double ak = a - static_cast<double>(steps - k) * dt;
    const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
    integral += w * m(tk, ak, spatial_mean(ubar_path[n].values(), dx));
  }
  return std::exp(-dt * integral);
}

}  // namespace agestruct
