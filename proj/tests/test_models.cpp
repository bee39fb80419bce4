#include <gtest/gtest.h>

#include <cmath>
#include <variant>

#include "agestruct/error.hpp"
#include "agestruct/models.hpp"

using namespace agestruct;

namespace {

constexpr double kDt = 0.01;

Grid model_grid() { return Grid::from_step(4.0, 1.0, 9, kDt, 0.1); }

BirthModulus birth(ScalarLaw response) {
  return BirthModulus{"test", [](double) { return 1.0; }, std::move(response)};
}

MortalityLaw constant_mortality(double m) {
  return [m](double, double, double) { return m; };
}

SpatialField birth_at(const ModelSpec& model, const AgeSpaceDensity& u, const AuxState& aux) {
  const SpatialField ubar(u.n_x(), 0.0);
  return model.birth(BirthContext{0.0, u, ubar, aux});
}

HaptotaxisState advance_haptotaxis(const ModelSpec& model, const Grid& g, double ubar_value,
                                   int steps) {
  AuxState aux = model.aux0;
  const AgeSpaceDensity u(g);
  const SpatialField ubar(g.n_x(), ubar_value);
  for (int n = 0; n < steps; ++n) {
    aux = model.aux_advance(aux, AuxContext{(n + 1) * kDt, kDt, u, ubar});
  }
  return std::get<HaptotaxisState>(aux);
}

double advance_proteus(const ModelSpec& model, const Grid& g, int steps) {
  AuxState aux = model.aux0;
  const AgeSpaceDensity u(g);
  const SpatialField ubar(g.n_x(), 0.0);
  for (int n = 0; n < steps; ++n) {
    aux = model.aux_advance(aux, AuxContext{(n + 1) * kDt, kDt, u, ubar});
  }
  return std::get<ProteusState>(aux).v[3];
}

}  // namespace

TEST(DelayBirth, ConstantHistoryScalesAgeMass) {
  const Grid g = model_grid();
  const ModelSpec model =
      build_delay_birth_model(DiffusionLaw::constant(1.0), birth([](double z) { return z; }),
                              constant_mortality(0.0), 1.0, [](double, double) { return 0.3; }, g);
  const AgeSpaceDensity u(g, 0.5);
  const SpatialField b = birth_at(model, u, model.aux0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR(b[i], 0.6, 1e-12);
  }
}

TEST(DelayBirth, MinimalDelayWithConstantModulus) {
  const Grid g = model_grid();
  const ModelSpec model = build_delay_birth_model(
      DiffusionLaw::constant(1.0), birth([](double) { return 1.5; }), constant_mortality(0.0), kDt,
      [](double s, double x) { return 1.0 + s + x; }, g);
  const AgeSpaceDensity u(g, 0.25);
  const SpatialField b = birth_at(model, u, model.aux0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR(b[i], 1.5, 1e-12);
  }
}

TEST(DelayBirth, ExponentialHistoryIntegral) {
  const Grid g = model_grid();
  const double tau = 1.0;
  auto ubar0 = [](double x) { return 1.0 + 0.5 * std::cos(3.14159 * x); };
  const ModelSpec model = build_delay_birth_model(
      DiffusionLaw::constant(1.0), birth([](double z) { return z; }), constant_mortality(0.0), tau,
      [&](double s, double x) { return std::exp(s) * ubar0(x); }, g);
  const SpatialField h = std::get<HistoryBuffer>(model.aux0).integral();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double expected = (1.0 - std::exp(-tau)) * ubar0(g.x(i));
    EXPECT_NEAR(h[i], expected, 1e-4 * expected);
  }
}

TEST(DelayBirth, RejectsNegativeHistory) {
  const Grid g = model_grid();
  EXPECT_THROW(build_delay_birth_model(DiffusionLaw::constant(1.0), birth([](double z) { return z; }),
                                       constant_mortality(0.0), 1.0,
                                       [](double s, double) { return s + 0.5; }, g),
               HypothesisViolation);
}

TEST(Haptotaxis, DecayWithoutPopulation) {
  const Grid g = model_grid();
  const double v0 = 0.8;
  const double f0 = 2.0;
  const ModelSpec model = build_haptotaxis_model(
      DiffusionLaw::constant(1.0), [](double) { return 0.5; }, birth([](double) { return 1.0; }),
      constant_mortality(0.0), SpatialField(g.n_x(), f0), SpatialField(g.n_x(), v0), g);
  const HaptotaxisState s = advance_haptotaxis(model, g, 0.0, 100);
  const double v_exact = v0 * std::exp(-1.0);
  const double f_exact = f0 * std::exp(-v0 * (1.0 - std::exp(-1.0)));
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    EXPECT_NEAR(s.v[i], v_exact, 5 * kDt * v_exact);
    EXPECT_NEAR(s.f[i], f_exact, 5 * kDt * f_exact);
  }
}

TEST(Haptotaxis, ConstantPopulationDrivesTaxisField) {
  const Grid g = model_grid();
  const ModelSpec model = build_haptotaxis_model(
      DiffusionLaw::constant(1.0), [](double) { return 0.5; }, birth([](double) { return 1.0; }),
      constant_mortality(0.0), SpatialField(g.n_x(), 1.0), SpatialField(g.n_x(), 0.0), g);
  const HaptotaxisState s = advance_haptotaxis(model, g, 1.0, 100);
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    EXPECT_NEAR(s.v[i], 1.0 - std::exp(-1.0), 5 * kDt);
  }
}

TEST(Haptotaxis, FieldIsNonIncreasing) {
  const Grid g = model_grid();
  const ModelSpec model = build_haptotaxis_model(
      DiffusionLaw::constant(1.0), [](double) { return 0.5; }, birth([](double) { return 1.0; }),
      constant_mortality(0.0), sample_field(g, [](double x) { return 1.0 + x; }),
      sample_field(g, [](double x) { return x * x; }), g);
  AuxState aux = model.aux0;
  const AgeSpaceDensity u(g);
  const SpatialField ubar = sample_field(g, [](double x) { return 2.0 - x; });
  for (int n = 0; n < 20; ++n) {
    const SpatialField before = std::get<HaptotaxisState>(aux).f;
    aux = model.aux_advance(aux, AuxContext{(n + 1) * kDt, kDt, u, ubar});
    const auto& after = std::get<HaptotaxisState>(aux).f;
    for (std::size_t i = 0; i < g.n_x(); ++i) {
      EXPECT_LE(after[i], before[i]);
    }
  }
}

TEST(Haptotaxis, ConstantFieldHasNoDrift) {
  const Grid g = model_grid();
  const ModelSpec model = build_haptotaxis_model(
      DiffusionLaw::constant(1.0), [](double) { return 0.5; }, birth([](double) { return 1.0; }),
      constant_mortality(0.0), SpatialField(g.n_x(), 1.5), SpatialField(g.n_x(), 0.0), g);
  const auto drift = model.drift(model.aux0);
  ASSERT_TRUE(drift.has_value());
  const SpatialField z = model.phi(SpatialField(g.n_x()), model.aux0);
  const auto op = assemble_operator(z, model.diffusion, g, drift);
  const auto plain = assemble_operator(z, model.diffusion, g);
  for (double v : op.drift_velocity()) {
    EXPECT_EQ(v, 0.0);
  }
  EXPECT_EQ(op.matrix().diag, plain.matrix().diag);
  EXPECT_EQ(op.matrix().upper, plain.matrix().upper);
  EXPECT_EQ(op.matrix().lower, plain.matrix().lower);
}

TEST(Haptotaxis, RejectsNegativeData) {
  const Grid g = model_grid();
  EXPECT_THROW(build_haptotaxis_model(DiffusionLaw::constant(1.0), [](double) { return 0.5; },
                                      birth([](double) { return 1.0; }), constant_mortality(0.0),
                                      SpatialField(g.n_x(), -1.0), SpatialField(g.n_x(), 0.0), g),
               HypothesisViolation);
}

TEST(Proteus, NoSwitchingGivesExponentialGrowth) {
  const Grid g = Grid::from_step(8.0, 1.0, 9, kDt, 0.1);
  const ModelSpec model = build_proteus_model(DiffusionLaw::constant(1.0), [](double) { return 0.0; },
                                              [](double) { return 0.0; }, 2.0,
                                              SpatialField(g.n_x(), 0.5), g);
  EXPECT_NEAR(advance_proteus(model, g, 100) / 0.5, std::exp(0.5), 2 * kDt * std::exp(0.5));
}

TEST(Proteus, FullSwitchingKeepsSwarmersConstant) {
  const Grid g = Grid::from_step(8.0, 1.0, 9, kDt, 0.1);
  const ModelSpec model = build_proteus_model(DiffusionLaw::constant(1.0), [](double) { return 1.0; },
                                              [](double) { return 0.0; }, 2.0,
                                              SpatialField(g.n_x(), 0.5), g);
  EXPECT_DOUBLE_EQ(advance_proteus(model, g, 50), 0.5);
}

TEST(Proteus, BirthFromSwarmers) {
  const Grid g = Grid::from_step(8.0, 1.0, 9, kDt, 0.1);
  const ModelSpec model = build_proteus_model(DiffusionLaw::constant(1.0),
                                              [](double v) { return 1.0 / (1.0 + v); },
                                              [](double) { return 0.0; }, 2.0,
                                              SpatialField(g.n_x(), 1.0), g);
  const SpatialField b = birth_at(model, AgeSpaceDensity(g), model.aux0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_DOUBLE_EQ(b[i], 0.25);
  }
  EXPECT_DOUBLE_EQ(model.weights.g(2.0), std::exp(1.0));
}

TEST(Proteus, RejectsNonPositiveTau) {
  const Grid g = model_grid();
  EXPECT_THROW(build_proteus_model(DiffusionLaw::constant(1.0), [](double) { return 1.0; },
                                   [](double) { return 0.0; }, 0.0, SpatialField(g.n_x(), 1.0), g),
               HypothesisViolation);
}

TEST(Validation, BirthLipschitzTracksHistoryMass) {
  const Grid g = model_grid();
  const ModelSpec model = build_delay_birth_model(
      DiffusionLaw::constant(1.0), birth([](double z) { return 0.8 * z; }), constant_mortality(0.0),
      1.0, [](double, double) { return 0.3; }, g);
  const ValidationReport r = validate_hypotheses(model, g);
  EXPECT_NEAR(r.find("birth_lipschitz")->value, 0.8, 1e-9);
  EXPECT_NEAR(r.find("birth_path_lipschitz")->value, 0.8 * 0.3, 1e-9);
  EXPECT_TRUE(r.admissible());
}

TEST(Validation, ZeroMortalityIsNonnegative) {
  const Grid g = model_grid();
  const ModelSpec model =
      build_renewal_model(DiffusionLaw::constant(1.0), birth([](double) { return 1.0; }),
                          constant_mortality(0.0), WeightSpec::unit(), g);
  const ValidationReport r = validate_hypotheses(model, g);
  EXPECT_TRUE(r.find("mortality_nonnegative")->passed);
  EXPECT_TRUE(r.find("birth_bounded")->passed);
}

TEST(Validation, DiffusionVanishingAtZeroFailsEllipticity) {
  const Grid g = model_grid();
  ModelSpec model = build_renewal_model(DiffusionLaw::constant(1.0), birth([](double) { return 1.0; }),
                                        constant_mortality(0.0), WeightSpec::unit(), g);
  model.diffusion = DiffusionLaw::linear(0.0, 1.0);
  const ValidationReport r = validate_hypotheses(model, g);
  const Check* c = r.find("ellipticity");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_EQ(c->location, 0.0);
  EXPECT_FALSE(r.admissible());
  EXPECT_THROW(build_renewal_model(DiffusionLaw::linear(0.0, 1.0), birth([](double) { return 1.0; }),
                                   constant_mortality(0.0), WeightSpec::unit(), g),
               HypothesisViolation);
}

TEST(Validation, SuperlinearBirthIsFlaggedUnbounded) {
  const Grid g = model_grid();
  const ModelSpec model =
      build_renewal_model(DiffusionLaw::constant(1.0), birth([](double z) { return z * z; }),
                          constant_mortality(0.0), WeightSpec::unit(), g);
  const ValidationReport r = validate_hypotheses(model, g);
  EXPECT_FALSE(r.find("birth_bounded")->passed);
  EXPECT_TRUE(r.admissible());
}
