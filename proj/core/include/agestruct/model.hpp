#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "agestruct/elliptic.hpp"
#include "agestruct/grid.hpp"
#include "agestruct/weights.hpp"

namespace agestruct {

// Ring of total-population slices at times t - (M-1) dt, ..., t with
// M = ceil(tau/dt) + 1.
class HistoryBuffer {
 public:
  HistoryBuffer() = default;
  // slices are ordered oldest first.
  HistoryBuffer(double tau, double dt, std::vector<SpatialField> slices);

  // Samples history(s, x) at s = -(M-1) dt, ..., 0.
  static HistoryBuffer sample(double tau, const Grid& grid,
                              const std::function<double(double, double)>& history);

  static std::size_t slice_count(double tau, double dt);

  double tau() const noexcept { return tau_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return slices_.size(); }
  // k = 0 is the oldest slice.
  const SpatialField& slice(std::size_t k) const { return slices_.at((head_ + k) % slices_.size()); }
  const SpatialField& newest() const { return slice(size() - 1); }

  // Drops the oldest slice and appends the one at t + dt.
  void push(const SpatialField& next);

  // Trapezoid rule for the integral over [t - tau, t]; when tau/dt is not an
  // integer the oldest panel is shortened, interpolating linearly.
  SpatialField integral() const;

  bool operator==(const HistoryBuffer& other) const;

 private:
  double tau_ = 0.0;
  double dt_ = 0.0;
  std::vector<SpatialField> slices_;
  std::size_t head_ = 0;
};

struct HaptotaxisState {
  SpatialField f;
  SpatialField v;
  bool operator==(const HaptotaxisState&) const = default;
};

struct ProteusState {
  SpatialField v;
  bool operator==(const ProteusState&) const = default;
};

using AuxState = std::variant<std::monostate, HistoryBuffer, HaptotaxisState, ProteusState>;

// Separable birth modulus b(a, z) = age(a) * response(z).
struct BirthModulus {
  std::string name;
  AgeFunction age;
  ScalarLaw response;

  double operator()(double a, double z) const { return age(a) * response(z); }
};

// m(t, a, z) with z the spatial mean of the total population.
using MortalityLaw = std::function<double(double, double, double)>;

struct BirthContext {
  double t;
  const AgeSpaceDensity& u;
  const SpatialField& ubar;
  const AuxState& aux;
};

// Inputs for advancing the auxiliary state to time t: the density and total
// population that drive the source terms.
struct AuxContext {
  double t;
  double dt;
  const AgeSpaceDensity& u;
  const SpatialField& ubar;
};

struct ValidationBox {
  double z_min = 0.0;
  double z_max = 4.0;
  int samples = 64;
};

struct ModelSpec {
  std::string name;
  DiffusionLaw diffusion;
  WeightSpec weights;
  // Coefficient field fed to the diffusion law.
  std::function<SpatialField(const SpatialField& ubar, const AuxState& aux)> phi;
  // Optional drift; an empty function means none.
  std::function<std::optional<DriftField>(const AuxState& aux)> drift;
  std::function<SpatialField(const BirthContext&)> birth;
  MortalityLaw mortality;
  // Empty for models without auxiliary dynamics.
  std::function<AuxState(const AuxState&, const AuxContext&)> aux_advance;
  AuxState aux0;
  double tau = 0.0;

  // Raw laws kept for sampled validation.
  std::optional<BirthModulus> birth_modulus;
  ScalarLaw chi;
  ScalarLaw xi;
  ValidationBox box;
  bool nonnegative = true;
};

}  // namespace agestruct
