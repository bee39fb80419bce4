#include "agestruct/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "agestruct/error.hpp"
#include "agestruct/report.hpp"

namespace agestruct {

EvolutionPath::EvolutionPath(std::vector<FrozenEllipticOperator> ops, double dt)
    : ops_(std::move(ops)), dt_(dt) {
  steppers_.reserve(ops_.size());
  for (const auto& op : ops_) {
    steppers_.emplace_back(op, dt_);
  }
}

SpatialField propagate(const EvolutionPath& path, std::size_t s_index, std::size_t t_index,
                       const SpatialField& w) {
  if (s_index > t_index || t_index > path.steps()) {
    throw IndexOutOfWindow("propagation indices " + std::to_string(s_index) + " -> " +
                           std::to_string(t_index) + " outside window of " +
                           std::to_string(path.steps()) + " steps");
  }
  SpatialField out = w;
  for (std::size_t k = s_index; k < t_index; ++k) {
    path.stepper(k).apply(out.values(), out.values());
  }
  return out;
}

std::string ProbeReport::to_text() const {
  std::string out;
  append_entry(out, "seed", static_cast<long long>(seed));
  append_entry(out, "gaps_tested", static_cast<long long>(gaps_tested));
  append_entry(out, "h1_smoothing", h1_smoothing);
  append_entry(out, "h1_worst_gap", h1_worst_gap);
  append_entry(out, "l2_bound", l2_bound);
  return out;
}

namespace {

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> vol) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += vol[i] * a[i] * b[i];
  }
  return s;
}

enum class Target { l2, gradient };

// Largest singular value of T U(t,s) from L2_W into L2 (T = identity or the
// first-difference gradient) by power iteration on the W-adjoint normal map.
double operator_norm(const EvolutionPath& path, std::size_t s, std::size_t t, Target target,
                     std::mt19937_64& rng, int iterations) {
  const std::size_t n = path.n_x();
  const auto vol = path.op(0).volumes();
  const double dx = vol[1];
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(n);
  std::vector<double> y(n);
  for (double& x : v) {
    x = dist(rng) - 0.5;
  }
  double best = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double nv = std::sqrt(weighted_dot(v, v, vol));
    if (!(nv > 0.0)) {
      break;
    }
    for (double& x : v) {
      x /= nv;
    }
    std::copy(v.begin(), v.end(), y.begin());
    for (std::size_t k = s; k < t; ++k) {
      path.stepper(k).apply(y, y);
    }
    double value = 0.0;
    if (target == Target::l2) {
      value = weighted_dot(y, y, vol);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] *= vol[i];
      }
    } else {
      // y <- G^T dx G y with G the forward difference.
      std::vector<double> g(n - 1);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        g[k] = (y[k + 1] - y[k]) / dx;
        value += dx * g[k] * g[k];
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? g[i - 1] : 0.0;
        const double right = i + 1 < n ? g[i] : 0.0;
        y[i] = left - right;
      }
    }
    best = std::max(best, std::sqrt(value));
    for (std::size_t k = t; k-- > s;) {
      path.stepper(k).apply_transposed(y, y);
    }
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = y[i] / vol[i];
    }
  }
  return best;
}

}  // namespace

ProbeReport smoothing_probe(const EvolutionPath& path, const NormSpec& norm, std::uint64_t seed,
                            int power_iterations) {
  if (norm.p != 2.0) {
    throw std::invalid_argument("smoothing probe measures discrete L2 norms only");
  }
  const std::size_t steps = path.steps();
  if (steps < 10) {
    throw std::invalid_argument("smoothing probe needs a window of at least 10 steps");
  }
  std::vector<std::size_t> gaps;
  for (std::size_t g = 1; g < steps; g *= 2) {
    gaps.push_back(g);
  }
  gaps.push_back(steps);

  std::mt19937_64 rng(seed);
  ProbeReport report;
  report.seed = seed;
  for (std::size_t gap : gaps) {
    for (std::size_t s : {std::size_t{0}, steps - gap}) {
      const double span = static_cast<double>(gap) * path.dt();
      const double h1 =
          std::sqrt(span) * operator_norm(path, s, s + gap, Target::gradient, rng, power_iterations);
      if (h1 > report.h1_smoothing) {
        report.h1_smoothing = h1;
        report.h1_worst_gap = span;
      }
      report.l2_bound = std::max(
          report.l2_bound, operator_norm(path, s, s + gap, Target::l2, rng, power_iterations));
      ++report.gaps_tested;
    }
  }
  return report;
}

double perturbation_response(const EvolutionPath& path, const EvolutionPath& other,
                             const SpatialField& w) {
  const std::size_t steps = std::min(path.steps(), other.steps());
  const auto vol = path.op(0).volumes();
  const double norm_w = std::sqrt(weighted_dot(w.values(), w.values(), vol));
  SpatialField a = w;
  SpatialField b = w;
  std::vector<double> diff(w.size());
  double sup = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    path.stepper(k).apply(a.values(), a.values());
    other.stepper(k).apply(b.values(), b.values());
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] = a[i] - b[i];
    }
    sup = std::max(sup, std::sqrt(weighted_dot(diff, diff, vol)));
  }
  return sup / norm_w;
}

}  // namespace agestruct
