#pragma once

#include <functional>

#include "agestruct/model.hpp"
#include "agestruct/validation.hpp"

namespace agestruct {

// Delay-dependent birth: Phi = ubar, D(ubar), and
//   B(t, x) = int b(a, H(t, x)) u(t, a, x) da,  H = int_{-tau}^0 ubar(t + s) ds.
// history(s, x) gives the total population for s in [-tau, 0].
ModelSpec build_delay_birth_model(DiffusionLaw diffusion, BirthModulus birth, MortalityLaw mortality,
                                  double tau, const std::function<double(double, double)>& history,
                                  const Grid& grid, ValidationBox box = {});

// Haptotaxis: D(f), drift u chi(f) f_x, f' = -v f, v' = v_xx + ubar - v, and
// B = int b(a, ubar) u da. Phi = f.
ModelSpec build_haptotaxis_model(DiffusionLaw diffusion, ScalarLaw chi, BirthModulus birth,
                                 MortalityLaw mortality, SpatialField f0, SpatialField v0,
                                 const Grid& grid, ValidationBox box = {});

// Swarmer/swimmer model with g = h = exp(a/tau):
//   v' = (1 - xi(v)) v / tau + int e^{a/tau} m(a) u da,  B = xi(v) v / tau.
ModelSpec build_proteus_model(DiffusionLaw diffusion, ScalarLaw xi, AgeFunction mortality,
                              double tau, SpatialField v0, const Grid& grid,
                              ValidationBox box = {});

// Renewal law B = int b(a, ubar) u da with Phi = ubar and general weights.
ModelSpec build_renewal_model(DiffusionLaw diffusion, BirthModulus birth, MortalityLaw mortality,
                              WeightSpec weights, const Grid& grid, ValidationBox box = {});

// Coefficients independent of the solution: constant diffusion d, prescribed
// boundary density birth(t, x), mortality m(t, a).
ModelSpec build_linear_model(double d, const std::function<double(double, double)>& birth,
                             const std::function<double(double, double)>& mortality,
                             const Grid& grid);

// Sampled structural checks (report only):
//   ellipticity, mortality_nonnegative, mortality_bound, weight checks,
//   birth_lipschitz, birth_bounded, chi_lipschitz, xi_smooth,
//   birth_path_lipschitz, phi_lipschitz.
ValidationReport validate_hypotheses(const ModelSpec& model, const Grid& grid,
                                     int sample_budget = 64);

}  // namespace agestruct
