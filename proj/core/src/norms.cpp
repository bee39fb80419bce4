#include "agestruct/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace agestruct {

namespace {

double power_sum(double acc, double v, double p) {
  const double a = std::abs(v);
  return acc + (p == 2.0 ? a * a : (p == 1.0 ? a : std::pow(a, p)));
}

double root(double s, double p) {
  return p == 2.0 ? std::sqrt(s) : (p == 1.0 ? s : std::pow(s, 1.0 / p));
}

}  // namespace

double spatial_norm(std::span<const double> w, double dx, const NormSpec& norm) {
  const double p = norm.p;
  if (!(p >= 1.0)) {
    throw std::invalid_argument("norm exponent must satisfy p >= 1");
  }
  const std::size_t n = w.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
    s += weight * power_sum(0.0, w[i], p);
  }
  double result = root(s, p);
  if (norm.level == NormLevel::lp) {
    return result;
  }
  double g = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g += dx * power_sum(0.0, (w[i + 1] - w[i]) / dx, p);
  }
  result += root(g, p);
  if (norm.level == NormLevel::first_order) {
    return result;
  }
  double h = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    h += dx * power_sum(0.0, (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (dx * dx), p);
  }
  return result + root(h, p);
}

double spatial_integral(std::span<const double> w, double dx) {
  const std::size_t n = w.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += ((i == 0 || i + 1 == n) ? 0.5 : 1.0) * w[i];
  }
  return s * dx;
}

double spatial_mean(std::span<const double> w, double dx) {
  return spatial_integral(w, dx) / (dx * static_cast<double>(w.size() - 1));
}

std::vector<double> sample_ages(const Grid& grid, const AgeFunction& f) {
  std::vector<double> out(grid.n_age());
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    out[j] = f(grid.age(j));
  }
  return out;
}

void weighted_age_integral(const AgeSpaceDensity& u, std::span<const double> kernel_at_nodes,
                           std::span<double> out) {
  const Grid& grid = u.grid();
  const std::size_t nx = grid.n_x();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    const double c = grid.age_weight(j) * kernel_at_nodes[j];
    const auto slice = u.age_slice(j);
    for (std::size_t i = 0; i < nx; ++i) {
      out[i] += c * slice[i];
    }
  }
}

SpatialField weighted_age_integral(const AgeSpaceDensity& u, const AgeFunction& kernel) {
  SpatialField out(u.n_x());
  const std::vector<double> k = sample_ages(u.grid(), kernel);
  weighted_age_integral(u, k, out.values());
  return out;
}

double weighted_norm(const AgeSpaceDensity& u, std::span<const double> g_at_nodes,
                     const NormSpec& norm) {
  const Grid& grid = u.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    s += grid.age_weight(j) * g_at_nodes[j] * spatial_norm(u.age_slice(j), grid.dx(), norm);
  }
  return s;
}

double weighted_norm(const AgeSpaceDensity& u, const WeightSpec& w, const NormSpec& norm) {
  return weighted_norm(u, sample_ages(u.grid(), w.g), norm);
}

double weighted_distance(const AgeSpaceDensity& u, const AgeSpaceDensity& v,
                         std::span<const double> g_at_nodes, const NormSpec& norm) {
  const Grid& grid = u.grid();
  std::vector<double> diff(grid.n_x());
  double s = 0.0;
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    const auto a = u.age_slice(j);
    const auto b = v.age_slice(j);
    for (std::size_t i = 0; i < diff.size(); ++i) {
      diff[i] = a[i] - b[i];
    }
    s += grid.age_weight(j) * g_at_nodes[j] * spatial_norm(diff, grid.dx(), norm);
  }
  return s;
}

double total_mass(const AgeSpaceDensity& u, std::span<const double> kernel_at_nodes) {
  std::vector<double> field(u.n_x());
  weighted_age_integral(u, kernel_at_nodes, field);
  return spatial_integral(field, u.grid().dx());
}

}  // namespace agestruct
