#include "agestruct/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "agestruct/error.hpp"
#include "agestruct/norms.hpp"

namespace agestruct {

DiffusionLaw DiffusionLaw::constant(double d0) {
  return {"constant", [d0](double) { return d0; }, d0};
}

DiffusionLaw DiffusionLaw::linear(double d0, double c) {
  return {"linear", [d0, c](double z) { return d0 + c * z; }, d0};
}

DiffusionLaw DiffusionLaw::quadratic(double d0, double c) {
  return {"quadratic", [d0, c](double z) { return d0 + c * z * z; }, d0};
}

DiffusionLaw DiffusionLaw::saturating(double d0, double c) {
  return {"saturating", [d0, c](double z) { return d0 + c * z / (1.0 + z); }, d0};
}

FrozenEllipticOperator::FrozenEllipticOperator(Tridiagonal matrix, std::vector<double> volumes,
                                               std::vector<double> drift_velocity, double d_min)
    : matrix_(std::move(matrix)),
      volumes_(std::move(volumes)),
      drift_(std::move(drift_velocity)),
      d_min_(d_min) {}

void FrozenEllipticOperator::apply(std::span<const double> w, std::span<double> out) const {
  matrix_.multiply(w, out);
}

SpatialField FrozenEllipticOperator::apply(const SpatialField& w) const {
  SpatialField out(w.size());
  apply(w.values(), out.values());
  return out;
}

FrozenEllipticOperator assemble_operator(const SpatialField& coeff, const DiffusionLaw& law,
                                         const Grid& grid, const std::optional<DriftField>& drift) {
  const std::size_t n = grid.n_x();
  if (coeff.size() != n) {
    throw std::invalid_argument("coefficient field size does not match the grid");
  }
  const double dx = grid.dx();
  std::vector<double> d(n);
  double d_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = law.value(coeff[i]);
    if (!std::isfinite(d[i]) || d[i] <= 0.0 || d[i] < law.d0 * (1.0 - 1e-9)) {
      throw EllipticityViolation(i, d[i], law.d0);
    }
    d_min = std::min(d_min, d[i]);
  }

  std::vector<double> vol(n);
  for (std::size_t i = 0; i < n; ++i) {
    vol[i] = grid.space_weight(i);
  }

  std::vector<double> velocity;
  if (drift) {
    const SpatialField& f = drift->potential;
    velocity.resize(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      velocity[k] = drift->sensitivity(0.5 * (f[k] + f[k + 1])) * (f[k + 1] - f[k]) / dx;
    }
  }

  Tridiagonal m(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double c = 0.5 * (d[k] + d[k + 1]) / dx;
    const double v = velocity.empty() ? 0.0 : velocity[k];
    const double vp = std::max(v, 0.0);
    const double vm = std::min(v, 0.0);
    m.diag[k] += (c + vp) / vol[k];
    m.upper[k] += (vm - c) / vol[k];
    m.lower[k + 1] -= (c + vp) / vol[k + 1];
    m.diag[k + 1] += (c - vm) / vol[k + 1];
  }
  return FrozenEllipticOperator(std::move(m), std::move(vol), std::move(velocity), d_min);
}

SpatialField resolvent_solve(const FrozenEllipticOperator& op, double lambda,
                             const SpatialField& rhs) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("resolvent parameter must be positive");
  }
  Tridiagonal shifted = op.matrix();
  for (double& v : shifted.diag) {
    v += lambda;
  }
  SpatialField out(rhs.size());
  TridiagonalFactor(shifted).solve(rhs.values(), out.values());
  return out;
}

SpatialField implicit_step(const FrozenEllipticOperator& op, double dt, const SpatialField& w) {
  SpatialField out(w.size());
  ImplicitStepper(op, dt).apply(w.values(), out.values());
  return out;
}

ImplicitStepper::ImplicitStepper(const FrozenEllipticOperator& op, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("implicit step requires dt > 0");
  }
  Tridiagonal system = op.matrix();
  for (std::size_t i = 0; i < system.size(); ++i) {
    system.lower[i] *= dt;
    system.upper[i] *= dt;
    system.diag[i] = 1.0 + dt * system.diag[i];
  }
  forward_ = TridiagonalFactor(system);
  transposed_ = TridiagonalFactor(system.transposed());
}

SectorProbe sector_probe(const FrozenEllipticOperator& op, std::span<const double> lambdas,
                         std::uint64_t seed, int samples) {
  const std::size_t n = op.size();
  const double dx = op.volumes()[1];
  const NormSpec l2{};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  SectorProbe probe;
  double worst = 1.0;
  std::vector<double> w(n);
  std::vector<double> aw(n);
  std::vector<double> shifted(n);
  for (double lambda : lambdas) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int s = 0; s < samples; ++s) {
      for (double& v : w) {
        v = dist(rng);
      }
      const double norm_w = spatial_norm(w, dx, l2);
      for (double& v : w) {
        v /= norm_w;
      }
      op.apply(w, aw);
      for (std::size_t i = 0; i < n; ++i) {
        shifted[i] = lambda * w[i] + aw[i];
      }
      const double q =
          spatial_norm(shifted, dx, l2) / (lambda * spatial_norm(w, dx, l2) + spatial_norm(aw, dx, l2));
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    probe.lambdas.push_back(lambda);
    probe.min_quotient.push_back(lo);
    probe.max_quotient.push_back(hi);
    worst = std::max({worst, 1.0 / lo, hi});
  }
  probe.kappa = worst;
  return probe;
}

}  // namespace agestruct
