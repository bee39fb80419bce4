#include "agestruct/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "agestruct/report.hpp"

namespace agestruct {

Grid::Grid(double a_max, std::size_t n_age, double length, std::size_t n_x, double dt,
           double t_window)
    : a_max_(a_max), n_age_(n_age), length_(length), n_x_(n_x), dt_(dt), t_window_(t_window) {
  if (n_age < 3 || n_x < 3) {
    throw std::invalid_argument("grid needs at least 3 nodes in age and space");
  }
  if (!(dt > 0.0) || !(length > 0.0) || !(a_max > 0.0)) {
    throw std::invalid_argument("grid extents and step must be positive");
  }
  const double da = a_max / static_cast<double>(n_age - 1);
  if (std::abs(da - dt) > 1e-12 * dt) {
    throw std::invalid_argument("age step " + std::to_string(da) + " differs from time step " +
                                std::to_string(dt));
  }
  if (!(a_max > t_window)) {
    throw std::invalid_argument("age truncation must exceed the window length");
  }
}

Grid Grid::from_step(double a_max, double length, std::size_t n_x, double dt, double t_window) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("time step must be positive");
  }
  const double steps = a_max / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, rounded)) {
    throw std::invalid_argument("a_max/dt = " + std::to_string(steps) + " is not an integer");
  }
  const auto n_age = static_cast<std::size_t>(rounded) + 1;
  return Grid(a_max, n_age, length, n_x, a_max / rounded, t_window);
}

double Grid::age_weight(std::size_t j) const noexcept {
  return (j == 0 || j + 1 == n_age_) ? 0.5 * dt_ : dt_;
}

double Grid::space_weight(std::size_t i) const noexcept {
  return (i == 0 || i + 1 == n_x_) ? 0.5 * dx() : dx();
}

Grid Grid::with_window(double t_window) const {
  return Grid(a_max_, n_age_, length_, n_x_, dt_, t_window);
}

bool SpatialField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double SpatialField::min_value() const noexcept {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double SpatialField::max_value() const noexcept {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

SpatialField sample_field(const Grid& grid, const std::function<double(double)>& f) {
  SpatialField out(grid.n_x());
  for (std::size_t i = 0; i < grid.n_x(); ++i) {
    out[i] = f(grid.x(i));
  }
  return out;
}

AgeSpaceDensity::AgeSpaceDensity(const Grid& grid, double value)
    : grid_(grid), values_(grid.n_age() * grid.n_x(), value) {}

AgeSpaceDensity AgeSpaceDensity::from_function(const Grid& grid,
                                               const std::function<double(double, double)>& f) {
  AgeSpaceDensity u(grid);
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    for (std::size_t i = 0; i < grid.n_x(); ++i) {
      u(j, i) = f(grid.age(j), grid.x(i));
    }
  }
  return u;
}

bool AgeSpaceDensity::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double AgeSpaceDensity::min_value() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

bool AgeSpaceDensity::is_nonnegative(double tol) const noexcept { return min_value() >= -tol; }

void write_density_csv(std::ostream& out, const AgeSpaceDensity& u) {
  const Grid& grid = u.grid();
  out << "a,x,value\n";
  for (std::size_t j = 0; j < grid.n_age(); ++j) {
    for (std::size_t i = 0; i < grid.n_x(); ++i) {
      out << format_real(grid.age(j)) << ',' << format_real(grid.x(i)) << ','
          << format_real(u(j, i)) << '\n';
    }
  }
}

}  // namespace agestruct
