#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agestruct/norms.hpp"
#include "agestruct/solver.hpp"
#include "agestruct/survival.hpp"
#include "sweep_kernel.hpp"

namespace agestruct {

namespace detail {

void advance_characteristics(const AgeSpaceDensity& prev, const ImplicitStepper& step,
                             std::span<const double> m_prev, std::span<const double> m_next,
                             std::span<const double> birth, AgeSpaceDensity& next, int threads) {
  const Grid& grid = prev.grid();
  const double dt = grid.dt();
  const auto n_age = static_cast<long>(grid.n_age());
  const std::size_t nx = grid.n_x();
  {
    auto head = next.age_slice(0);
    std::copy(birth.begin(), birth.end(), head.begin());
  }
#pragma omp parallel for num_threads(threads) schedule(static) if (threads > 1)
  for (long j = 1; j < n_age; ++j) {
    const auto src = prev.age_slice(static_cast<std::size_t>(j - 1));
    auto dst = next.age_slice(static_cast<std::size_t>(j));
    step.apply(src, dst);
    const double s = step_survival(dt, m_prev[static_cast<std::size_t>(j - 1)],
                                   m_next[static_cast<std::size_t>(j)]);
    for (std::size_t i = 0; i < nx; ++i) {
      dst[i] *= s;
    }
  }
}

std::vector<double> mortality_at_nodes(const ModelSpec& model, const Grid& grid, double t,
                                       const SpatialField& ubar) {
  const double z = spatial_mean(ubar.values(), grid.dx());
  std::vector<double> m(grid.n_age());
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    m[j] = model.mortality(t, grid.age(j), z);
  }
  return m;
}

FrozenEllipticOperator assemble_level(const ModelSpec& model, const Grid& grid,
                                      const SpatialField& ubar, const AuxState& aux) {
  std::optional<DriftField> drift;
  if (model.drift) {
    drift = model.drift(aux);
  }
  return assemble_operator(model.phi(ubar, aux), model.diffusion, grid, drift);
}

SpatialField total_population(const AgeSpaceDensity& u, std::span<const double> h_nodes) {
  SpatialField out(u.n_x());
  weighted_age_integral(u, h_nodes, out.values());
  return out;
}

}  // namespace detail

FrozenCoefficients freeze_coefficients(const std::vector<AgeSpaceDensity>& path,
                                       const ModelSpec& model, const AuxState& aux_start,
                                       double t_start) {
  if (path.size() < 2) {
    throw std::invalid_argument("a window needs at least one step");
  }
  const Grid& grid = path.front().grid();
  const double dt = grid.dt();
  const std::size_t levels = path.size();
  const std::vector<double> h_nodes = sample_ages(grid, model.weights.h);

  FrozenCoefficients c;
  c.t_start = t_start;
  c.ubar.reserve(levels);
  c.birth.reserve(levels);
  c.mortality.reserve(levels);
  std::vector<FrozenEllipticOperator> ops;
  ops.reserve(levels - 1);

  AuxState aux = aux_start;
  for (std::size_t n = 0; n < levels; ++n) {
    const double t = detail::level_time(t_start, n, dt);
    c.ubar.push_back(detail::total_population(path[n], h_nodes));
    if (n == 0) {
      c.birth.emplace_back(path[0].age_slice(0));
    } else {
      if (model.aux_advance) {
        aux = model.aux_advance(aux, AuxContext{t, dt, path[n], c.ubar[n]});
      }
      c.birth.push_back(model.birth(BirthContext{t, path[n], c.ubar[n], aux}));
    }
    c.mortality.push_back(detail::mortality_at_nodes(model, grid, t, c.ubar[n]));
    if (n + 1 < levels) {
      ops.push_back(detail::assemble_level(model, grid, c.ubar[n], aux));
    }
  }
  c.path = EvolutionPath(std::move(ops), dt);
  c.aux_end = std::move(aux);
  return c;
}

namespace detail {

std::vector<AgeSpaceDensity> sweep(const FrozenCoefficients& c, const AgeSpaceDensity& start,
                                   int threads) {
  const std::size_t levels = c.ubar.size();
  std::vector<AgeSpaceDensity> out;
  out.reserve(levels);
  out.push_back(start);
  for (std::size_t n = 1; n < levels; ++n) {
    out.emplace_back(start.grid());
    advance_characteristics(out[n - 1], c.path.stepper(n - 1), c.mortality[n - 1], c.mortality[n],
                            c.birth[n].values(), out[n], threads);
  }
  return out;
}

}  // namespace detail

std::vector<AgeSpaceDensity> theta_sweep(const std::vector<AgeSpaceDensity>& guess,
                                         const ModelSpec& model, const AuxState& aux_start,
                                         double t_start, int threads) {
  const FrozenCoefficients c = freeze_coefficients(guess, model, aux_start, t_start);
  return detail::sweep(c, guess.front(), threads);
}

}  // namespace agestruct
