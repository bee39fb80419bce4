#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agestruct/elliptic.hpp"
#include "agestruct/grid.hpp"
#include "agestruct/norms.hpp"

namespace agestruct {

// Backward-Euler realization of U(t, s): step k (from t_k to t_{k+1}) solves
// with ops[k], frozen at the left endpoint.
class EvolutionPath {
 public:
  EvolutionPath() = default;
  EvolutionPath(std::vector<FrozenEllipticOperator> ops, double dt);

  std::size_t steps() const noexcept { return ops_.size(); }
  double dt() const noexcept { return dt_; }
  std::size_t n_x() const noexcept { return ops_.empty() ? 0 : ops_.front().size(); }
  const FrozenEllipticOperator& op(std::size_t k) const { return ops_.at(k); }
  const ImplicitStepper& stepper(std::size_t k) const { return steppers_.at(k); }

 private:
  std::vector<FrozenEllipticOperator> ops_;
  std::vector<ImplicitStepper> steppers_;
  double dt_ = 0.0;
};

// U(t_index, s_index) w. Throws IndexOutOfWindow unless
// s_index <= t_index <= steps().
SpatialField propagate(const EvolutionPath& path, std::size_t s_index, std::size_t t_index,
                       const SpatialField& w);

struct ProbeReport {
  std::uint64_t seed = 0;
  std::size_t gaps_tested = 0;
  // sup (t-s)^{1/2} ||grad U(t,s)||_{L2 -> L2}
  double h1_smoothing = 0.0;
  double h1_worst_gap = 0.0;
  // sup ||U(t,s)||_{L2 -> L2}
  double l2_bound = 0.0;

  std::string to_text() const;
};

// Operator norms estimated by power iteration in the trapezoid-weighted inner
// product, started from seeded random fields, over gaps dt, 2dt, 4dt, ... and
// the full window at both ends of the window. Requires norm.p == 2 and a
// window of at least 10 steps.
ProbeReport smoothing_probe(const EvolutionPath& path, const NormSpec& norm,
                            std::uint64_t seed = 7, int power_iterations = 40);

// sup over t of ||(U(t,0) - U_*(t,0)) w||_2 / ||w||_2.
double perturbation_response(const EvolutionPath& path, const EvolutionPath& other,
                             const SpatialField& w);

}  // namespace agestruct
