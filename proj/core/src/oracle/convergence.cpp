#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "agestruct/error.hpp"
#include "agestruct/oracle.hpp"

namespace agestruct::oracle {

namespace {

double max_difference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("refinement levels sampled on different lattices");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d = std::max(d, std::abs(a[k] - b[k]));
  }
  return d;
}

}  // namespace

ConvergenceResult self_convergence(const std::function<std::vector<double>(int)>& solve,
                                   double exact_tolerance) {
  const std::vector<double> s0 = solve(0);
  const std::vector<double> s1 = solve(1);
  const std::vector<double> s2 = solve(2);
  ConvergenceResult r;
  r.coarse_difference = max_difference(s0, s1);
  r.fine_difference = max_difference(s1, s2);
  double scale = 0.0;
  for (double v : s2) {
    scale = std::max(scale, std::abs(v));
  }
  if (r.coarse_difference <= exact_tolerance * std::max(1.0, scale)) {
    r.degenerate = true;
    r.order = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  if (!(r.fine_difference < r.coarse_difference)) {
    throw NonMonotoneError("refinement differences do not decrease");
  }
  r.order = std::log2(r.coarse_difference / r.fine_difference);
  return r;
}

}  // namespace agestruct::oracle
