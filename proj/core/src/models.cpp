#include "agestruct/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "agestruct/error.hpp"
#include "agestruct/norms.hpp"

namespace agestruct {

namespace {

// Trapezoid weights times an age profile, evaluated once per grid.
std::vector<double> age_quadrature(const Grid& grid, const AgeFunction& profile) {
  std::vector<double> w(grid.n_age());
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    w[j] = grid.age_weight(j) * profile(grid.age(j));
  }
  return w;
}

// out_i = sum_j w_j u(a_j, x_i)
SpatialField age_moment(const AgeSpaceDensity& u, const std::vector<double>& w) {
  SpatialField out(u.n_x());
  for (std::size_t j = 0; j < u.n_age(); ++j) {
    const auto slice = u.age_slice(j);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += w[j] * slice[i];
    }
  }
  return out;
}

std::function<SpatialField(const BirthContext&)> renewal_birth(const Grid& grid,
                                                               const BirthModulus& b,
                                                               bool use_history) {
  auto weights = age_quadrature(grid, b.age);
  auto response = b.response;
  return [weights = std::move(weights), response, use_history](const BirthContext& ctx) {
    SpatialField out = age_moment(ctx.u, weights);
    if (use_history) {
      const SpatialField h = std::get<HistoryBuffer>(ctx.aux).integral();
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= response(h[i]);
      }
    } else {
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= response(ctx.ubar[i]);
      }
    }
    return out;
  };
}

SpatialField identity_phi(const SpatialField& ubar, const AuxState&) { return ubar; }

void require_admissible(const ModelSpec& model, const Grid& grid) {
  const ValidationReport report = validate_hypotheses(model, grid, model.box.samples);
  if (const Check* bad = report.first_fatal_failure()) {
    throw HypothesisViolation(bad->name + " (value " + std::to_string(bad->value) + " at " +
                              std::to_string(bad->location) + ")");
  }
}

void require_nonnegative(const SpatialField& f, const char* what) {
  if (!f.all_finite() || f.min_value() < 0.0) {
    throw HypothesisViolation(std::string(what) + " must be finite and non-negative");
  }
}

}  // namespace

ModelSpec build_delay_birth_model(DiffusionLaw diffusion, BirthModulus birth, MortalityLaw mortality,
                                  double tau, const std::function<double(double, double)>& history,
                                  const Grid& grid, ValidationBox box) {
  ModelSpec model;
  model.name = "delay_birth";
  model.diffusion = std::move(diffusion);
  model.weights = WeightSpec::unit();
  model.phi = identity_phi;
  model.birth = renewal_birth(grid, birth, true);
  model.mortality = std::move(mortality);
  model.aux_advance = [](const AuxState& aux, const AuxContext& ctx) {
    HistoryBuffer next = std::get<HistoryBuffer>(aux);
    next.push(ctx.ubar);
    return AuxState(std::move(next));
  };
  model.aux0 = HistoryBuffer::sample(tau, grid, history);
  for (std::size_t k = 0; k < std::get<HistoryBuffer>(model.aux0).size(); ++k) {
    require_nonnegative(std::get<HistoryBuffer>(model.aux0).slice(k), "history");
  }
  model.tau = tau;
  model.birth_modulus = std::move(birth);
  model.box = box;
  require_admissible(model, grid);
  return model;
}

ModelSpec build_haptotaxis_model(DiffusionLaw diffusion, ScalarLaw chi, BirthModulus birth,
                                 MortalityLaw mortality, SpatialField f0, SpatialField v0,
                                 const Grid& grid, ValidationBox box) {
  require_nonnegative(f0, "f0");
  require_nonnegative(v0, "v0");
  ModelSpec model;
  model.name = "haptotaxis";
  model.diffusion = std::move(diffusion);
  model.weights = WeightSpec::unit();
  model.phi = [](const SpatialField&, const AuxState& aux) {
    return std::get<HaptotaxisState>(aux).f;
  };
  model.drift = [chi](const AuxState& aux) {
    return std::optional<DriftField>(DriftField{std::get<HaptotaxisState>(aux).f, chi});
  };
  model.birth = renewal_birth(grid, birth, false);
  model.mortality = std::move(mortality);
  const FrozenEllipticOperator laplacian =
      assemble_operator(SpatialField(grid.n_x()), DiffusionLaw::constant(1.0), grid);
  model.aux_advance = [laplacian](const AuxState& aux, const AuxContext& ctx) {
    const auto& prev = std::get<HaptotaxisState>(aux);
    SpatialField rhs(prev.v.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      rhs[i] = prev.v[i] / ctx.dt + ctx.ubar[i];
    }
    HaptotaxisState next;
    next.v = resolvent_solve(laplacian, 1.0 / ctx.dt + 1.0, rhs);
    next.f = prev.f;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      next.f[i] *= std::exp(-ctx.dt * next.v[i]);
    }
    return AuxState(std::move(next));
  };
  model.aux0 = HaptotaxisState{std::move(f0), std::move(v0)};
  model.birth_modulus = std::move(birth);
  model.chi = std::move(chi);
  model.box = box;
  require_admissible(model, grid);
  return model;
}

ModelSpec build_proteus_model(DiffusionLaw diffusion, ScalarLaw xi, AgeFunction mortality,
                              double tau, SpatialField v0, const Grid& grid, ValidationBox box) {
  if (!(tau > 0.0)) {
    throw HypothesisViolation("tau > 0");
  }
  require_nonnegative(v0, "v0");
  ModelSpec model;
  model.name = "proteus";
  model.diffusion = std::move(diffusion);
  model.weights = WeightSpec::exponential(tau);
  model.phi = identity_phi;
  model.birth = [xi, tau](const BirthContext& ctx) {
    const auto& v = std::get<ProteusState>(ctx.aux).v;
    SpatialField out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[i] = xi(v[i]) * v[i] / tau;
    }
    return out;
  };
  model.mortality = [mortality](double, double a, double) { return mortality(a); };
  auto source_weights =
      age_quadrature(grid, [mortality, tau](double a) { return std::exp(a / tau) * mortality(a); });
  model.aux_advance = [xi, tau, source_weights = std::move(source_weights)](
                          const AuxState& aux, const AuxContext& ctx) {
    const auto& prev = std::get<ProteusState>(aux).v;
    const SpatialField source = age_moment(ctx.u, source_weights);
    ProteusState next{prev};
    for (std::size_t i = 0; i < prev.size(); ++i) {
      // Backward Euler by fixed-point iteration.
      const double base = prev[i] + ctx.dt * source[i];
      double v = prev[i];
      for (int it = 0; it < 200; ++it) {
        const double updated = base + ctx.dt * (1.0 - xi(v)) * v / tau;
        const bool done = std::abs(updated - v) <= 1e-15 * (1.0 + std::abs(updated));
        v = updated;
        if (done) {
          break;
        }
      }
      next.v[i] = v;
    }
    return AuxState(std::move(next));
  };
  model.aux0 = ProteusState{std::move(v0)};
  model.tau = tau;
  model.xi = std::move(xi);
  model.box = box;
  require_admissible(model, grid);
  return model;
}

ModelSpec build_renewal_model(DiffusionLaw diffusion, BirthModulus birth, MortalityLaw mortality,
                              WeightSpec weights, const Grid& grid, ValidationBox box) {
  ModelSpec model;
  model.name = "renewal";
  model.diffusion = std::move(diffusion);
  model.weights = std::move(weights);
  model.phi = identity_phi;
  model.birth = renewal_birth(grid, birth, false);
  model.mortality = std::move(mortality);
  model.birth_modulus = std::move(birth);
  model.box = box;
  require_admissible(model, grid);
  return model;
}

ModelSpec build_linear_model(double d, const std::function<double(double, double)>& birth,
                             const std::function<double(double, double)>& mortality,
                             const Grid& grid) {
  ModelSpec model;
  model.name = "linear";
  model.diffusion = DiffusionLaw::constant(d);
  model.weights = WeightSpec::unit();
  model.phi = [n = grid.n_x()](const SpatialField&, const AuxState&) { return SpatialField(n); };
  model.birth = [birth, grid](const BirthContext& ctx) {
    return sample_field(grid, [&](double x) { return birth(ctx.t, x); });
  };
  model.mortality = [mortality](double t, double a, double) { return mortality(t, a); };
  model.box = ValidationBox{0.0, 0.0, 2};
  require_admissible(model, grid);
  return model;
}

ValidationReport validate_hypotheses(const ModelSpec& model, const Grid& grid, int sample_budget) {
  ValidationReport report;
  const ValidationBox& box = model.box;
  const int n = std::max(sample_budget, 2);
  std::vector<double> zs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    zs[static_cast<std::size_t>(k)] = box.z_min + (box.z_max - box.z_min) * k / (n - 1);
  }
  const std::size_t age_stride = std::max<std::size_t>(1, grid.n_age() / static_cast<std::size_t>(n));

  {
    double worst = std::numeric_limits<double>::infinity();
    double at = 0.0;
    for (double z : zs) {
      const double d = model.diffusion.value(z);
      if (!(d >= worst)) {
        worst = std::isfinite(d) ? d : -std::numeric_limits<double>::infinity();
        at = z;
      }
    }
    const bool ok = model.diffusion.d0 > 0.0 && worst > 0.0 && worst >= model.diffusion.d0 * (1 - 1e-12);
    report.add({"ellipticity", ok, true, worst, at, "min D over box, d0=" + std::to_string(model.diffusion.d0)});
  }

  {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double at = 0.0;
    for (double t : {0.0, 1.0, 10.0}) {
      for (std::size_t j = 0; j < grid.n_age(); j += age_stride) {
        for (double z : zs) {
          const double m = model.mortality(t, grid.age(j), z);
          if (!(m >= lo)) {
            lo = std::isfinite(m) ? m : -std::numeric_limits<double>::infinity();
            at = grid.age(j);
          }
          hi = std::max(hi, m);
        }
      }
    }
    report.add({"mortality_nonnegative", !model.nonnegative || lo >= 0.0, model.nonnegative, lo, at, ""});
    report.add({"mortality_bound", std::isfinite(hi) && std::isfinite(lo), false, std::exp(-lo), 0.0,
                "c0 = exp(-min m)"});
  }

  try {
    report.merge(validate_weights(model.weights, grid));
  } catch (const WeightViolation& e) {
    report.add({"lower_bound", false, true, 0.0, e.location(), e.condition()});
  }

  if (model.birth_modulus) {
    const BirthModulus& b = *model.birth_modulus;
    double lip = 0.0;
    double lip_at = 0.0;
    for (std::size_t j = 0; j < grid.n_age(); j += age_stride) {
      const double a = grid.age(j);
      const double g = model.weights.g(a);
      for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
        const double q = std::abs(b(a, zs[k + 1]) - b(a, zs[k])) / (g * (zs[k + 1] - zs[k]));
        if (!(q <= lip)) {
          lip = q;
          lip_at = zs[k];
        }
      }
    }
    report.add({"birth_lipschitz", std::isfinite(lip), true, lip, lip_at, "sup |db/dz| / g"});

    // Growth of sup b between the box scaled by 10 and by 1000.
    auto sup_b = [&](double scale) {
      double s = 0.0;
      const double top = box.z_min + scale * (box.z_max - box.z_min);
      for (std::size_t j = 0; j < grid.n_age(); j += age_stride) {
        const double a = grid.age(j);
        for (int k = 0; k < n; ++k) {
          s = std::max(s, b(a, box.z_min + (top - box.z_min) * k / (n - 1)) / model.weights.g(a));
        }
      }
      return s;
    };
    const double near = sup_b(10.0);
    const double far = sup_b(1000.0);
    report.add({"birth_bounded", std::isfinite(far) && far <= 1.5 * near + 1e-12, false, far, near,
                "sup b/g at 1000x box vs 10x box"});
  }

  if (model.chi) {
    double lip = 0.0;
    for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
      lip = std::max(lip, std::abs(model.chi(zs[k + 1]) - model.chi(zs[k])) / (zs[k + 1] - zs[k]));
    }
    report.add({"chi_lipschitz", std::isfinite(lip), true, lip, 0.0, ""});
  }

  if (model.xi) {
    // Third finite differences stay finite.
    double worst = 0.0;
    const double h = (box.z_max - box.z_min) / (n - 1);
    for (std::size_t k = 0; k + 3 < zs.size(); ++k) {
      const double d3 = (model.xi(zs[k + 3]) - 3 * model.xi(zs[k + 2]) + 3 * model.xi(zs[k + 1]) -
                         model.xi(zs[k])) /
                        (h * h * h);
      worst = std::max(worst, std::abs(d3));
    }
    report.add({"xi_smooth", std::isfinite(worst), true, worst, 0.0, "sup |third difference|"});
  }

  // Empirical Lipschitz quotients of the birth law and of Phi at t = 0.
  if (box.z_max > box.z_min) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const std::vector<double> h_nodes = sample_ages(grid, model.weights.h);
    const std::vector<double> g_nodes = sample_ages(grid, model.weights.g);
    double h_mass = 0.0;
    for (std::size_t j = 0; j < grid.n_age(); ++j) {
      h_mass += grid.age_weight(j) * h_nodes[j];
    }
    AgeSpaceDensity u(grid);
    for (double& v : u.values()) {
      v = (box.z_min + 0.5 * (box.z_max - box.z_min) * (0.5 + dist(rng))) / h_mass;
    }
    AgeSpaceDensity du(grid);
    for (double& v : du.values()) {
      v = 1e-3 * (box.z_max - box.z_min) / h_mass * dist(rng);
    }
    AgeSpaceDensity up(grid);
    for (std::size_t k = 0; k < u.values().size(); ++k) {
      up.values()[k] = u.values()[k] + du.values()[k];
    }
    std::vector<double> ubar_v(grid.n_x());
    std::vector<double> ubar_p(grid.n_x());
    weighted_age_integral(u, h_nodes, ubar_v);
    weighted_age_integral(up, h_nodes, ubar_p);
    const SpatialField ubar(ubar_v);
    const SpatialField ubar_plus(ubar_p);
    std::vector<double> du_mass(grid.n_x());
    weighted_age_integral(du, g_nodes, du_mass);
    double denom = 0.0;
    for (double v : du_mass) {
      denom = std::max(denom, v);
    }
    const SpatialField b0 = model.birth(BirthContext{0.0, u, ubar, model.aux0});
    const SpatialField b1 = model.birth(BirthContext{0.0, up, ubar_plus, model.aux0});
    double num = 0.0;
    for (std::size_t i = 0; i < b0.size(); ++i) {
      num = std::max(num, std::abs(b1[i] - b0[i]));
    }
    const double quotient = denom > 0.0 ? num / denom : 0.0;
    report.add({"birth_path_lipschitz", std::isfinite(quotient), false, quotient, 0.0,
                "empirical c0 at t=0"});

    const SpatialField p0 = model.phi(ubar, model.aux0);
    const SpatialField p1 = model.phi(ubar_plus, model.aux0);
    double pnum = 0.0;
    double pden = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
      pnum = std::max(pnum, std::abs(p1[i] - p0[i]));
      pden = std::max(pden, std::abs(ubar_plus[i] - ubar[i]));
    }
    const double pq = pden > 0.0 ? pnum / pden : 0.0;
    report.add({"phi_lipschitz", std::isfinite(pq), false, pq, 0.0, "empirical at t=0"});
  }
  return report;
}

}  // namespace agestruct
