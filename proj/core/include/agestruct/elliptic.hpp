#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agestruct/grid.hpp"
#include "agestruct/tridiagonal.hpp"

namespace agestruct {

using ScalarLaw = std::function<double(double)>;

// Diffusion coefficient z -> D(z) with its declared ellipticity floor d0.
struct DiffusionLaw {
  std::string name;
  ScalarLaw value;
  double d0 = 1.0;

  static DiffusionLaw constant(double d0);
  // d0 + c z
  static DiffusionLaw linear(double d0, double c);
  // d0 + c z^2
  static DiffusionLaw quadratic(double d0, double c);
  // d0 + c z / (1 + z)
  static DiffusionLaw saturating(double d0, double c);
};

// Advective flux w chi(f) df/dx for the haptotactic drift.
struct DriftField {
  SpatialField potential;
  ScalarLaw sensitivity;
};

// Discrete -d/dx(D(z) d/dx w) + d/dx(w chi(f) df/dx) on the vertex-centred
// grid with zero-flux boundaries, written as (J_{i+1/2} - J_{i-1/2}) / vol_i.
class FrozenEllipticOperator {
 public:
  FrozenEllipticOperator() = default;
  FrozenEllipticOperator(Tridiagonal matrix, std::vector<double> volumes,
                         std::vector<double> drift_velocity, double d_min);

  std::size_t size() const noexcept { return matrix_.size(); }
  const Tridiagonal& matrix() const noexcept { return matrix_; }
  // Control volumes (trapezoid space weights).
  std::span<const double> volumes() const noexcept { return volumes_; }
  // Drift velocity at the half nodes; empty without drift.
  std::span<const double> drift_velocity() const noexcept { return drift_; }
  bool has_drift() const noexcept { return !drift_.empty(); }
  // Smallest D over the nodes.
  double d_min() const noexcept { return d_min_; }

  void apply(std::span<const double> w, std::span<double> out) const;
  SpatialField apply(const SpatialField& w) const;

 private:
  Tridiagonal matrix_;
  std::vector<double> volumes_;
  std::vector<double> drift_;
  double d_min_ = 0.0;
};

// Half-node coefficients D_{i+1/2} = (D(z_i) + D(z_{i+1})) / 2, donor-cell
// drift. Throws EllipticityViolation when D(z_i) < d0 or D(z_i) <= 0.
FrozenEllipticOperator assemble_operator(const SpatialField& coeff, const DiffusionLaw& law,
                                         const Grid& grid,
                                         const std::optional<DriftField>& drift = std::nullopt);

// Solves (lambda + A) u = rhs. Throws std::invalid_argument for lambda <= 0.
SpatialField resolvent_solve(const FrozenEllipticOperator& op, double lambda,
                             const SpatialField& rhs);

// (I + dt A)^{-1} w.
SpatialField implicit_step(const FrozenEllipticOperator& op, double dt, const SpatialField& w);

// Factored backward-Euler step for repeated use.
class ImplicitStepper {
 public:
  ImplicitStepper() = default;
  ImplicitStepper(const FrozenEllipticOperator& op, double dt);

  std::size_t size() const noexcept { return forward_.size(); }
  // out may alias w.
  void apply(std::span<const double> w, std::span<double> out) const { forward_.solve(w, out); }
  // (I + dt A^T)^{-1} w.
  void apply_transposed(std::span<const double> w, std::span<double> out) const {
    transposed_.solve(w, out);
  }

 private:
  TridiagonalFactor forward_;
  TridiagonalFactor transposed_;
};

struct SectorProbe {
  double kappa = 1.0;
  std::vector<double> lambdas;
  std::vector<double> min_quotient;
  std::vector<double> max_quotient;
};

// For each lambda and seeded random unit w, measures
// ||(lambda + A) w|| / (lambda ||w|| + ||A w||) in discrete L2.
SectorProbe sector_probe(const FrozenEllipticOperator& op, std::span<const double> lambdas,
                         std::uint64_t seed = 1, int samples = 32);

}  // namespace agestruct
