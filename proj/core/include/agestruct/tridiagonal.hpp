#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agestruct {

// Tridiagonal matrix; lower[i] couples row i to i-1 (lower[0] unused),
// upper[i] couples row i to i+1 (upper[n-1] unused).
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}

  std::size_t size() const noexcept { return diag.size(); }
  void multiply(std::span<const double> x, std::span<double> y) const;
  Tridiagonal transposed() const;
};

// Thomas factorization without pivoting. Safe for the non-singular M-matrices
// produced by the elliptic assembly, which is the only intended use.
class TridiagonalFactor {
 public:
  TridiagonalFactor() = default;
  // Throws SingularSystem on a zero or non-finite pivot.
  explicit TridiagonalFactor(const Tridiagonal& m);

  std::size_t size() const noexcept { return inv_pivot_.size(); }

  // out may alias rhs.
  void solve(std::span<const double> rhs, std::span<double> out) const;

 private:
  std::vector<double> lower_;
  std::vector<double> inv_pivot_;
  std::vector<double> upper_scaled_;
};

}  // namespace agestruct
