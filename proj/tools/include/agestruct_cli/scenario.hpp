#pragma once

#include "agestruct/grid.hpp"
#include "agestruct/model.hpp"
#include "agestruct/solver.hpp"
#include "agestruct/validation.hpp"
#include "agestruct_cli/config.hpp"

namespace agestruct::cli {

struct Scenario {
  Grid grid;
  ModelSpec model;
  SolverState initial;
  PicardWindow window;
  double t_final;
  SolverOptions options;
  ValidationReport validation;
};

DiffusionLaw make_diffusion(const DiffusionSection& s);
BirthModulus make_birth(const BirthSection& s);
MortalityLaw make_mortality(const MortalitySection& s);
AgeSpaceDensity make_initial(const InitialSection& s, const Grid& grid, std::uint64_t seed);

// Grid errors surface as ConfigError; model hypothesis failures propagate as
// HypothesisViolation, EllipticityViolation or WeightViolation.
Scenario build_scenario(const Config& config);

}  // namespace agestruct::cli
