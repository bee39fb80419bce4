#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "agestruct/oracle.hpp"

namespace agestruct::oracle {

double Trajectory::at(double time) const {
  if (t.empty()) {
    throw std::logic_error("empty trajectory");
  }
  if (time <= t.front()) {
    return value.front();
  }
  if (time >= t.back()) {
    return value.back();
  }
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t k = static_cast<std::size_t>(it - t.begin());
  const double w = (time - t[k - 1]) / (t[k] - t[k - 1]);
  return (1.0 - w) * value[k - 1] + w * value[k];
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "t,P\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    out << fmt::format("{:.17g},{:.17g}\n", t[k], value[k]);
  }
}

namespace {

// Composite Simpson weights on n intervals of width h; with n odd the last
// three intervals use the 3/8 rule.
std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n < 2) {
    throw std::invalid_argument("Simpson rule needs at least two intervals");
  }
  std::vector<double> w(n + 1, 0.0);
  const std::size_t simpson = (n % 2 == 0) ? n : n - 3;
  for (std::size_t k = 0; k + 2 <= simpson; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  if (simpson != n) {
    const std::size_t k = simpson;
    w[k] += 3.0 * h / 8.0;
    w[k + 1] += 9.0 * h / 8.0;
    w[k + 2] += 9.0 * h / 8.0;
    w[k + 3] += 3.0 * h / 8.0;
  }
  return w;
}

constexpr std::array<double, 3> kGaussNodes{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// Weights for m intervals: Simpson (with the 3/8 tail), trapezoid for a single
// interval, a zero weight for a single point.
std::vector<double> piece_weights(std::size_t m, double h) {
  if (m == 0) {
    return {0.0};
  }
  if (m == 1) {
    return {0.5 * h, 0.5 * h};
  }
  return simpson_weights(m, h);
}

}  // namespace

// Age integrals split at the characteristic a = t; the left piece takes the
// birth-branch value (corner) at the kink.
Trajectory renewal_oracle(const RenewalProblem& problem) {
  const double h = problem.dt;
  const auto n = static_cast<std::size_t>(std::llround(problem.a_max / h));
  const auto steps = static_cast<std::size_t>(std::llround(problem.t_final / h));
  const std::vector<double> full = simpson_weights(n, h);

  std::vector<double> u(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    u[i] = problem.u0(static_cast<double>(i) * h);
  }

  std::vector<double> left;
  std::vector<double> right;
  std::size_t kink = 0;
  auto set_kink = [&](std::size_t j) {
    kink = j;
    if (kink > 0 && kink < n) {
      left = piece_weights(kink, h);
      right = piece_weights(n - kink, h);
    }
  };
  // sum of weights times f(i, v[i]) with the corner value at the kink on the left.
  auto integrate = [&](const std::vector<double>& v, double corner, auto&& f) {
    double s = 0.0;
    if (kink == 0 || kink >= n) {
      for (std::size_t i = 0; i <= n; ++i) {
        s += full[i] * f(i, v[i]);
      }
      return s;
    }
    for (std::size_t i = 0; i < kink; ++i) {
      s += left[i] * f(i, v[i]);
    }
    s += left[kink] * f(kink, corner);
    for (std::size_t i = kink; i <= n; ++i) {
      s += right[i - kink] * f(i, v[i]);
    }
    return s;
  };
  auto identity = [](std::size_t, double x) { return x; };

  Trajectory traj;
  double p = integrate(u, 0.0, identity);
  traj.t.push_back(0.0);
  traj.value.push_back(p);
  double corner = integrate(u, 0.0, [&](std::size_t i, double x) {
    return problem.birth(static_cast<double>(i) * h, p) * x;
  });

  std::vector<double> next(n + 1);
  std::vector<double> survival(n + 1, 1.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * h;
    set_kink(k + 1);
    double p_new = p;
    double corner_new = corner;
    bool survival_ready = false;
    for (int it = 0; it < 200; ++it) {
      if (!survival_ready) {
        // exp(-int m) along (t0 + s, a - h + s), s in [0, h].
        for (std::size_t i = 1; i <= n; ++i) {
          const double a_start = static_cast<double>(i - 1) * h;
          double integral = 0.0;
          for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            const double s = 0.5 * h * (1.0 + kGaussNodes[q]);
            const double pop = p + (p_new - p) * s / h;
            integral += kGaussWeights[q] * problem.mortality(t0 + s, a_start + s, pop);
          }
          survival[i] = std::exp(-0.5 * h * integral);
        }
        survival_ready = !problem.mortality_depends_on_population;
      }
      for (std::size_t i = 1; i <= n; ++i) {
        next[i] = survival[i] * u[i - 1];
      }
      if (kink <= n) {
        corner_new = survival[kink] * corner;
      }
      next[0] = 0.0;
      const double rest = integrate(next, corner_new, [&](std::size_t i, double x) {
        return problem.birth(static_cast<double>(i) * h, p_new) * x;
      });
      const double w0 = (kink == 0 || kink >= n) ? full[0] : left[0];
      next[0] = rest / (1.0 - w0 * problem.birth(0.0, p_new));
      const double p_iter = integrate(next, corner_new, identity);
      const bool done = std::abs(p_iter - p_new) <= 1e-14 * std::max(1.0, std::abs(p_iter));
      p_new = p_iter;
      if (done) {
        break;
      }
    }
    std::swap(u, next);
    p = p_new;
    corner = corner_new;
    traj.t.push_back(t0 + h);
    traj.value.push_back(p);
  }
  return traj;
}

}  // namespace agestruct::oracle
