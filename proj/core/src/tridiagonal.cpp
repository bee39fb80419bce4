#include "agestruct/tridiagonal.hpp"

#include <cmath>

#include "agestruct/error.hpp"

namespace agestruct {

void Tridiagonal::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) {
      s += lower[i] * x[i - 1];
    }
    if (i + 1 < n) {
      s += upper[i] * x[i + 1];
    }
    y[i] = s;
  }
}

Tridiagonal Tridiagonal::transposed() const {
  const std::size_t n = size();
  Tridiagonal t(n);
  t.diag = diag;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.upper[i] = lower[i + 1];
    t.lower[i + 1] = upper[i];
  }
  return t;
}

TridiagonalFactor::TridiagonalFactor(const Tridiagonal& m)
    : lower_(m.lower), inv_pivot_(m.size()), upper_scaled_(m.size(), 0.0) {
  const std::size_t n = m.size();
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pivot = m.diag[i] - (i > 0 ? m.lower[i] * prev : 0.0);
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw SingularSystem("zero pivot in tridiagonal factorization at row " + std::to_string(i));
    }
    inv_pivot_[i] = 1.0 / pivot;
    prev = (i + 1 < n) ? m.upper[i] * inv_pivot_[i] : 0.0;
    upper_scaled_[i] = prev;
  }
}

void TridiagonalFactor::solve(std::span<const double> rhs, std::span<double> out) const {
  const std::size_t n = size();
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    prev = (rhs[i] - (i > 0 ? lower_[i] * prev : 0.0)) * inv_pivot_[i];
    out[i] = prev;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    out[i] -= upper_scaled_[i] * out[i + 1];
  }
}

}  // namespace agestruct
