#pragma once

#include <functional>
#include <string>

#include "agestruct/grid.hpp"
#include "agestruct/validation.hpp"

namespace agestruct {

using AgeFunction = std::function<double(double)>;

// Age weight g of the state space and averaging kernel h of the total
// population, with the constants of 0 < g0 <= g(a+b) <= g1 g(a) g(b).
struct WeightSpec {
  AgeFunction g;
  AgeFunction h;
  double g0 = 1.0;
  double g1 = 1.0;
  double zeta = 1.0;
  std::string name;

  // g = h = 1.
  static WeightSpec unit();
  // g = h = exp(a/tau).
  static WeightSpec exponential(double tau);
};

// Sampled checks on [0, a_max + t_window]:
//   lower_bound        g(a) >= g0 > 0 (fatal)
//   submultiplicative  g(a+b) <= g1 g(a) g(b) on node pairs
//   kernel_bound       c1 = max h/g, reported
//   kernel_holder      empirical Hoelder exponent of h relative to g
// Throws WeightViolation when the lower bound fails.
ValidationReport validate_weights(const WeightSpec& w, const Grid& grid);

}  // namespace agestruct
