#include "agestruct_cli/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "agestruct/models.hpp"
#include "agestruct/norms.hpp"

namespace agestruct::cli {

DiffusionLaw make_diffusion(const DiffusionSection& s) {
  if (s.law == "constant") {
    return DiffusionLaw::constant(s.d0);
  }
  if (s.law == "linear") {
    return DiffusionLaw::linear(s.d0, s.c);
  }
  if (s.law == "quadratic") {
    return DiffusionLaw::quadratic(s.d0, s.c);
  }
  if (s.law == "saturating") {
    return DiffusionLaw::saturating(s.d0, s.c);
  }
  throw ConfigError("unknown diffusion law '" + s.law + "'");
}

BirthModulus make_birth(const BirthSection& s) {
  BirthModulus b;
  if (s.age == "constant") {
    b.age = [](double) { return 1.0; };
  } else if (s.age == "window") {
    b.age = [a1 = s.a1, a2 = s.a2](double a) { return (a >= a1 && a <= a2) ? 1.0 : 0.0; };
  } else {
    throw ConfigError("unknown birth age profile '" + s.age + "'");
  }
  const double beta = s.beta;
  const double k = s.k;
  if (s.response == "constant") {
    b.response = [beta](double) { return beta; };
  } else if (s.response == "linear") {
    b.response = [beta](double z) { return beta * z; };
  } else if (s.response == "square") {
    b.response = [beta](double z) { return beta * z * z; };
  } else if (s.response == "logistic") {
    b.response = [beta, k](double z) { return beta / (1.0 + k * z); };
  } else if (s.response == "saturating") {
    b.response = [beta, k](double z) { return beta * z / (1.0 + k * z); };
  } else {
    throw ConfigError("unknown birth response '" + s.response + "'");
  }
  b.name = s.age + "*" + s.response;
  return b;
}

MortalityLaw make_mortality(const MortalitySection& s) {
  return [m0 = s.m0, m_age = s.m_age, m_pop = s.m_pop](double, double a, double z) {
    return m0 + m_age * a + m_pop * z;
  };
}

AgeSpaceDensity make_initial(const InitialSection& s, const Grid& grid, std::uint64_t seed) {
  const double w = s.width;
  std::function<double(double)> profile;
  if (s.profile == "constant") {
    profile = [w](double a) { return a <= w ? 1.0 : 0.0; };
  } else if (s.profile == "parabola") {
    profile = [w](double a) { return a <= w ? 4.0 * a * (w - a) / (w * w) : 0.0; };
  } else if (s.profile == "smooth") {
    profile = [w](double a) {
      const double v = std::sin(std::numbers::pi * a / w);
      return a <= w ? v * v : 0.0;
    };
  } else if (s.profile == "exponential") {
    profile = [w](double a) { return std::exp(-a / w); };
  } else {
    throw ConfigError("unknown initial profile '" + s.profile + "'");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AgeSpaceDensity u(grid);
  const double length = grid.length();
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    const double pa = profile(grid.age(j));
    for (std::size_t i = 0; i < grid.n_x(); ++i) {
      const double px = 1.0 + s.x_mod * std::cos(std::numbers::pi * grid.x(i) / length);
      const double noise = s.noise > 0.0 ? 1.0 + s.noise * unit(rng) : 1.0;
      u(j, i) = s.amplitude * pa * px * noise;
    }
  }
  return u;
}

namespace {

SpatialField modulated(const Grid& grid, double base, double mod) {
  return sample_field(grid, [&](double x) {
    return base * (1.0 + mod * std::cos(std::numbers::pi * x / grid.length()));
  });
}

ModelSpec build_model(const Config& c, const Grid& grid, const AgeSpaceDensity& u0) {
  const std::string& name = c.run.model;
  if (name == "delay_birth") {
    SpatialField ubar0(grid.n_x());
    weighted_age_integral(u0, std::vector<double>(grid.n_age(), 1.0), ubar0.values());
    const double dx = grid.dx();
    const double rate = c.delay.history == "exponential" ? c.delay.rate : 0.0;
    auto history = [ubar0, dx, rate](double s, double x) {
      const auto i = static_cast<std::size_t>(std::llround(x / dx));
      return ubar0[i] * std::exp(rate * s);
    };
    return build_delay_birth_model(make_diffusion(c.diffusion), make_birth(c.birth),
                                   make_mortality(c.mortality), c.delay.tau, history, grid,
                                   c.validation);
  }
  if (name == "haptotaxis") {
    ScalarLaw chi;
    if (c.haptotaxis.chi == "linear") {
      chi = [c0 = c.haptotaxis.chi0, c1 = c.haptotaxis.chi1](double f) { return c0 + c1 * f; };
    } else {
      chi = [c0 = c.haptotaxis.chi0](double) { return c0; };
    }
    return build_haptotaxis_model(make_diffusion(c.diffusion), chi, make_birth(c.birth),
                                  make_mortality(c.mortality),
                                  modulated(grid, c.haptotaxis.f0, c.haptotaxis.f_mod),
                                  SpatialField(grid.n_x(), c.haptotaxis.v0), grid, c.validation);
  }
  if (name == "proteus") {
    ScalarLaw xi;
    if (c.proteus.xi == "constant") {
      xi = [x0 = c.proteus.xi0](double) { return x0; };
    } else {
      xi = [](double v) { return 1.0 / (1.0 + v); };
    }
    if (c.mortality.m_pop != 0.0) {
      throw ConfigError("mortality.m_pop is not supported by the proteus model");
    }
    AgeFunction m = [m0 = c.mortality.m0, m_age = c.mortality.m_age](double a) {
      return m0 + m_age * a;
    };
    return build_proteus_model(make_diffusion(c.diffusion), xi, m, c.proteus.tau,
                               modulated(grid, c.proteus.v0, c.proteus.v_mod), grid, c.validation);
  }
  if (name == "renewal") {
    return build_renewal_model(make_diffusion(c.diffusion), make_birth(c.birth),
                               make_mortality(c.mortality), WeightSpec::unit(), grid, c.validation);
  }
  if (name == "linear") {
    if (c.mortality.m_pop != 0.0) {
      throw ConfigError("mortality.m_pop is not supported by the linear model");
    }
    const double length = grid.length();
    auto birth = [b0 = c.linear.b0, mod = c.linear.b_mod, length](double, double x) {
      return b0 * (1.0 + mod * std::cos(std::numbers::pi * x / length));
    };
    auto mortality = [m0 = c.mortality.m0, m_age = c.mortality.m_age](double, double a) {
      return m0 + m_age * a;
    };
    return build_linear_model(c.diffusion.d0, birth, mortality, grid);
  }
  throw ConfigError("unknown model '" + name + "'");
}

}  // namespace

Scenario build_scenario(const Config& config) {
  Grid grid = [&] {
    try {
      return Grid::from_step(config.run.a_max, config.run.length, config.run.n_x, config.run.dt,
                             config.window.length);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }();
  AgeSpaceDensity u0 = make_initial(config.initial, grid, config.run.seed);
  ModelSpec model = build_model(config, grid, u0);
  ValidationReport validation = validate_hypotheses(model, grid, config.validation.samples);
  SolverOptions options;
  options.threads = config.run.threads;
  options.snapshot_times = config.run.snapshots;
  AuxState aux = model.aux0;
  return Scenario{grid,
                  std::move(model),
                  SolverState{0.0, std::move(u0), std::move(aux)},
                  config.window,
                  config.run.t_final,
                  std::move(options),
                  std::move(validation)};
}

}  // namespace agestruct::cli
