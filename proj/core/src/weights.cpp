#include "agestruct/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "agestruct/error.hpp"

namespace agestruct {

WeightSpec WeightSpec::unit() {
  return WeightSpec{[](double) { return 1.0; }, [](double) { return 1.0; }, 1.0, 1.0, 1.0, "unit"};
}

WeightSpec WeightSpec::exponential(double tau) {
  auto e = [tau](double a) { return std::exp(a / tau); };
  return WeightSpec{e, e, 1.0, 1.0, 1.0, fmt::format("exp(a/{})", tau)};
}

namespace {

// At most ~max_points equally spaced lattice ages on [0, a_end].
std::vector<double> sample_lattice(const Grid& grid, double a_end, std::size_t max_points) {
  const auto steps = static_cast<std::size_t>(std::floor(a_end / grid.dt() + 1e-9));
  const std::size_t stride = std::max<std::size_t>(1, steps / max_points);
  std::vector<double> ages;
  for (std::size_t k = 0; k <= steps; k += stride) {
    ages.push_back(static_cast<double>(k) * grid.dt());
  }
  return ages;
}

}  // namespace

ValidationReport validate_weights(const WeightSpec& w, const Grid& grid) {
  ValidationReport report;
  const double a_end = grid.a_max() + grid.t_window();
  const std::vector<double> ages = sample_lattice(grid, a_end, 400);

  double g_min = std::numeric_limits<double>::infinity();
  double g_min_at = 0.0;
  for (double a : ages) {
    const double g = w.g(a);
    if (!(g >= g_min)) {
      g_min = std::isfinite(g) ? g : -std::numeric_limits<double>::infinity();
      g_min_at = a;
    }
  }
  const bool lower_ok = w.g0 > 0.0 && g_min >= w.g0 * (1.0 - 1e-12);
  report.add({"lower_bound", lower_ok, true, g_min, g_min_at, fmt::format("g0={}", w.g0)});
  if (!lower_ok) {
    throw WeightViolation("g(a) >= g0 > 0", g_min_at);
  }

  const std::vector<double> coarse = sample_lattice(grid, a_end, 120);
  double worst = 0.0;
  double worst_at = 0.0;
  for (double a : coarse) {
    for (double b : coarse) {
      if (a + b > a_end + 1e-12) {
        break;
      }
      const double q = w.g(a + b) / (w.g(a) * w.g(b));
      if (q > worst) {
        worst = q;
        worst_at = a + b;
      }
    }
  }
  report.add({"submultiplicative", worst <= w.g1 * (1.0 + 1e-12), false, worst, worst_at,
              fmt::format("g1={}", w.g1)});

  double c1 = 0.0;
  double c1_at = 0.0;
  for (double a : ages) {
    const double q = w.h(a) / w.g(a);
    if (!(q <= c1)) {
      c1 = q;
      c1_at = a;
    }
  }
  report.add({"kernel_bound", std::isfinite(c1), false, c1, c1_at, "c1 = max h/g"});

  // Hoelder quotient sup_a |h(a+d) - h(a)| / g(a) at two separations.
  auto quotient = [&](double d) {
    double q = 0.0;
    for (double a : ages) {
      if (a + d > a_end) {
        break;
      }
      q = std::max(q, std::abs(w.h(a + d) - w.h(a)) / w.g(a));
    }
    return q;
  };
  const double d1 = grid.dt();
  const double d2 = 64.0 * grid.dt();
  const double q1 = quotient(d1);
  const double q2 = quotient(d2);
  double exponent = 1.0;
  if (q1 > 0.0 && q2 > 0.0) {
    exponent = std::log(q2 / q1) / std::log(d2 / d1);
  }
  report.add({"kernel_holder", std::isfinite(exponent) && exponent >= w.zeta - 0.05, false,
              exponent, 0.0, fmt::format("zeta={}", w.zeta)});
  return report;
}

}  // namespace agestruct
