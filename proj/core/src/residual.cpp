#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agestruct/norms.hpp"
#include "agestruct/solver.hpp"
#include "agestruct/survival.hpp"

namespace agestruct {

ResidualReport residual_check(const std::vector<AgeSpaceDensity>& path, const ModelSpec& model,
                              const AuxState& aux_start, double t_start) {
  return residual_check(path, freeze_coefficients(path, model, aux_start, t_start));
}

ResidualReport residual_check(const std::vector<AgeSpaceDensity>& path,
                              const FrozenCoefficients& coeffs) {
  if (path.size() != coeffs.ubar.size()) {
    throw std::invalid_argument("path and coefficients cover different levels");
  }
  const Grid& grid = path.front().grid();
  const double dt = grid.dt();
  const double dx = grid.dx();
  const std::size_t nx = grid.n_x();
  const std::size_t last = grid.n_age() - 1;
  const auto first_index = static_cast<long long>(std::llround(coeffs.t_start / dt));

  auto age_mass = [&](const AgeSpaceDensity& u) {
    std::vector<double> p(nx, 0.0);
    for (std::size_t j = 0; j <= last; ++j) {
      const auto s = u.age_slice(j);
      const double w = grid.age_weight(j);
      for (std::size_t i = 0; i < nx; ++i) {
        p[i] += w * s[i];
      }
    }
    return p;
  };

  ResidualReport rep;
  rep.levels = path.size();
  std::vector<double> p_now = age_mass(path.front());
  const double mass0 = spatial_integral(p_now, dx);
  std::vector<double> ap(nx);
  std::vector<double> au(nx);
  std::vector<double> loss(nx);

  for (std::size_t n = 0; n + 1 < path.size(); ++n) {
    const AgeSpaceDensity& u = path[n];
    const AgeSpaceDensity& v = path[n + 1];
    const FrozenEllipticOperator& op = coeffs.path.op(n);
    const auto& m_now = coeffs.mortality[n];
    const auto& m_next = coeffs.mortality[n + 1];
    const long long global = first_index + static_cast<long long>(n);
    std::vector<double> p_next = age_mass(v);

    std::fill(loss.begin(), loss.end(), 0.0);
    for (std::size_t j = 0; j < last; ++j) {
      const double s = step_survival(dt, m_now[j], m_next[j + 1]);
      const double c = (j + 1 == last ? 0.5 : 1.0) * dt;
      const auto uj = u.age_slice(j);
      for (std::size_t i = 0; i < nx; ++i) {
        loss[i] += c * (1.0 - s) / dt * uj[i];
      }

      if (static_cast<long long>(j) != global) {
        op.apply(uj, au);
        const auto vj = v.age_slice(j + 1);
        for (std::size_t i = 0; i < nx; ++i) {
          const double r = (vj[i] - uj[i]) / dt + au[i] + (1.0 - s) / dt * uj[i];
          rep.pointwise_residual = std::max(rep.pointwise_residual, std::abs(r));
        }
      }
    }

    if (global > 0) {
      op.apply(p_now, ap);
      const auto birth = u.age_slice(0);
      const auto tail_a = u.age_slice(last - 1);
      const auto tail_b = u.age_slice(last);
      for (std::size_t i = 0; i < nx; ++i) {
        const double out = 0.5 * dt * (tail_a[i] + tail_b[i]);
        const double r = (p_next[i] - p_now[i]) / dt + ap[i] - birth[i] + loss[i] + out / dt;
        rep.ode_residual = std::max(rep.ode_residual, std::abs(r));
      }
    }
    p_now = std::move(p_next);
    if (mass0 != 0.0) {
      rep.population_drift =
          std::max(rep.population_drift, std::abs(spatial_integral(p_now, dx) - mass0) / std::abs(mass0));
    }
  }
  return rep;
}

}  // namespace agestruct
