#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace agestruct {

// Characteristic-aligned lattice: the age step equals the time step, so the
// transport part of the age dynamics maps grid nodes onto grid nodes.
//
// Ages a_j = j*da on [0, a_max]; space x_i = i*dx on [0, length] (vertex
// centred, Neumann boundaries at both ends).
class Grid {
 public:
  // Throws std::invalid_argument unless a_max/(n_age-1) == dt to relative
  // precision 1e-12, n_age >= 3, n_x >= 3, dt > 0 and a_max > t_window.
  Grid(double a_max, std::size_t n_age, double length, std::size_t n_x, double dt,
       double t_window);

  // Derives n_age from a_max/dt, which must be an integer to within 1e-9.
  static Grid from_step(double a_max, double length, std::size_t n_x, double dt,
                        double t_window);

  double a_max() const noexcept { return a_max_; }
  std::size_t n_age() const noexcept { return n_age_; }
  double length() const noexcept { return length_; }
  std::size_t n_x() const noexcept { return n_x_; }
  double dt() const noexcept { return dt_; }
  double da() const noexcept { return dt_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_x_ - 1); }
  double t_window() const noexcept { return t_window_; }

  double age(std::size_t j) const noexcept { return static_cast<double>(j) * dt_; }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx(); }

  // Trapezoid quadrature weights including the step.
  double age_weight(std::size_t j) const noexcept;
  double space_weight(std::size_t i) const noexcept;

  Grid with_window(double t_window) const;

  bool operator==(const Grid&) const = default;

 private:
  double a_max_;
  std::size_t n_age_;
  double length_;
  std::size_t n_x_;
  double dt_;
  double t_window_;
};

// One space-indexed field on the n_x spatial nodes.
class SpatialField {
 public:
  SpatialField() = default;
  explicit SpatialField(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit SpatialField(std::vector<double> values) : values_(std::move(values)) {}
  explicit SpatialField(std::span<const double> values) : values_(values.begin(), values.end()) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool all_finite() const noexcept;
  double min_value() const noexcept;
  double max_value() const noexcept;

  bool operator==(const SpatialField&) const = default;

 private:
  std::vector<double> values_;
};

SpatialField sample_field(const Grid& grid, const std::function<double(double)>& f);

// Density u(a_j, x_i) on the age x space lattice, stored age-major.
class AgeSpaceDensity {
 public:
  explicit AgeSpaceDensity(const Grid& grid, double value = 0.0);

  static AgeSpaceDensity from_function(const Grid& grid,
                                       const std::function<double(double, double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t n_age() const noexcept { return grid_.n_age(); }
  std::size_t n_x() const noexcept { return grid_.n_x(); }

  double operator()(std::size_t j, std::size_t i) const noexcept { return values_[j * n_x() + i]; }
  double& operator()(std::size_t j, std::size_t i) noexcept { return values_[j * n_x() + i]; }

  std::span<const double> age_slice(std::size_t j) const noexcept {
    return {values_.data() + j * n_x(), n_x()};
  }
  std::span<double> age_slice(std::size_t j) noexcept { return {values_.data() + j * n_x(), n_x()}; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool all_finite() const noexcept;
  double min_value() const noexcept;
  // True when min(values) >= -tol.
  bool is_nonnegative(double tol = 1e-12) const noexcept;

  bool operator==(const AgeSpaceDensity& other) const noexcept {
    return grid_ == other.grid_ && values_ == other.values_;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

// CSV snapshot: header `a,x,value`, age-major rows, round-trip precision.
void write_density_csv(std::ostream& out, const AgeSpaceDensity& u);

}  // namespace agestruct
