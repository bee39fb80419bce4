#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "agestruct/elliptic.hpp"

// Reference computations that share no numerical kernels with the solver:
// their own quadrature, stepping and linear algebra.
namespace agestruct::oracle {

struct Trajectory {
  std::vector<double> t;
  std::vector<double> value;

  // Linear interpolation; clamps outside the sampled range.
  double at(double time) const;
  // Header `t,P`.
  void write_csv(std::ostream& out) const;
};

// Spatially homogeneous problem in age only:
//   u_t + u_a = -m(t, a, P) u,  u(t, 0) = int b(a, P) u(t, a) da,
// with P = int u da.
struct RenewalProblem {
  std::function<double(double a, double p)> birth;
  std::function<double(double t, double a, double p)> mortality;
  bool mortality_depends_on_population = false;
  std::function<double(double a)> u0;
  double a_max = 10.0;
  double t_final = 1.0;
  double dt = 1e-3;
};

// Exact shift along characteristics on a lattice with step dt, mortality by
// 3-point Gauss-Legendre per step, age integrals by composite Simpson, and
// the implicit boundary value by scalar fixed-point iteration.
Trajectory renewal_oracle(const RenewalProblem& problem);

// Dense copy of a banded operator for spectral and direct-solve references.
class DenseOperator {
 public:
  // Throws std::length_error above 256 nodes.
  explicit DenseOperator(const FrozenEllipticOperator& op);
  ~DenseOperator();
  DenseOperator(DenseOperator&&) noexcept;
  DenseOperator& operator=(DenseOperator&&) noexcept;

  std::size_t size() const noexcept;
  double entry(std::size_t i, std::size_t j) const;
  std::vector<double> apply(std::span<const double> w) const;
  // Ascending real parts.
  std::vector<double> eigenvalues() const;
  // Eigenvector for the k-th smallest eigenvalue of the drift-free operator,
  // normalised to unit max norm.
  std::vector<double> eigenvector(std::size_t k) const;
  std::vector<double> resolvent(double lambda, std::span<const double> rhs) const;
  // (I + dt A)^{-steps} w by repeated dense LU solves.
  std::vector<double> implicit_power(double dt, std::size_t steps, std::span<const double> w) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience wrapper matching dense_oracle(op).
DenseOperator dense_oracle(const FrozenEllipticOperator& op);

struct ConvergenceResult {
  double order = 0.0;
  double coarse_difference = 0.0;
  double fine_difference = 0.0;
  // True when the resolutions agree to round-off (exact discretization).
  bool degenerate = false;
};

// solve(r) returns the solution at refinement r in {0, 1, 2} (dt / 2^r),
// restricted to the coarse lattice. The order is log2(e01 / e12) in the max
// norm. Throws NonMonotoneError when the differences do not decrease.
ConvergenceResult self_convergence(const std::function<std::vector<double>(int)>& solve,
                                   double exact_tolerance = 1e-12);

struct OdeResult {
  Trajectory trajectory;
  bool blew_up = false;
  double blowup_time = 0.0;
};

// Classical RK4 for y' = f(t, y); stops once y exceeds y_max.
OdeResult rk4(const std::function<double(double, double)>& f, double y0, double t_final,
              double dt, double y_max = 1e12);

// Blowup time of P' = kappa P^3, P(0) = p0: 1 / (2 kappa p0^2).
double cubic_blowup_time(double kappa, double p0);

}  // namespace agestruct::oracle
