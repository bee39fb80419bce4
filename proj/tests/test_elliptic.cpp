#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "agestruct/elliptic.hpp"
#include "agestruct/error.hpp"
#include "agestruct/oracle.hpp"

using namespace agestruct;

namespace {

Grid space_grid(double length, std::size_t n_x) { return Grid::from_step(1.0, length, n_x, 0.1, 0.1); }

double weighted_sum(const FrozenEllipticOperator& op, const SpatialField& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s += op.volumes()[i] * w[i];
  }
  return s;
}

double weighted_l2(const FrozenEllipticOperator& op, const SpatialField& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s += op.volumes()[i] * w[i] * w[i];
  }
  return std::sqrt(s);
}

DriftField cosine_drift(const Grid& g, double chi) {
  return DriftField{sample_field(g, [](double x) { return 1.0 + 0.5 * std::cos(std::numbers::pi * x); }),
                    [chi](double) { return chi; }};
}

}  // namespace

TEST(Elliptic, InteriorStencilForUnitDiffusion) {
  const Grid g = space_grid(2.0, 5);
  const auto op = assemble_operator(SpatialField(5, 0.0), DiffusionLaw::constant(1.0), g);
  const Tridiagonal& m = op.matrix();
  for (std::size_t i = 1; i + 1 < 5; ++i) {
    EXPECT_DOUBLE_EQ(m.lower[i], -4.0);
    EXPECT_DOUBLE_EQ(m.diag[i], 8.0);
    EXPECT_DOUBLE_EQ(m.upper[i], -4.0);
  }
  EXPECT_DOUBLE_EQ(m.diag[0], 8.0);
  EXPECT_DOUBLE_EQ(m.upper[0], -8.0);
}

TEST(Elliptic, AnnihilatesConstants) {
  const Grid g = space_grid(1.0, 17);
  const SpatialField z = sample_field(g, [](double x) { return x * (1.0 - x); });
  const auto op = assemble_operator(z, DiffusionLaw::quadratic(1.0, 1.0), g);
  const SpatialField aw = op.apply(SpatialField(17, 3.0));
  for (std::size_t i = 0; i < aw.size(); ++i) {
    EXPECT_NEAR(aw[i], 0.0, 1e-12);
  }
}

TEST(Elliptic, MatchesHandAssembledMatrix) {
  const Grid g = space_grid(1.0, 5);
  const double dx = 0.25;
  const SpatialField z(std::vector<double>{0.0, 0.5, 1.0, 0.5, 2.0});
  const auto op = assemble_operator(z, DiffusionLaw::quadratic(1.0, 1.0), g);
  const auto dense = oracle::dense_oracle(op);

  std::vector<double> d(5);
  for (std::size_t i = 0; i < 5; ++i) {
    d[i] = 1.0 + z[i] * z[i];
  }
  std::vector<double> vol{dx / 2, dx, dx, dx, dx / 2};
  std::vector<std::vector<double>> a(5, std::vector<double>(5, 0.0));
  for (std::size_t k = 0; k < 4; ++k) {
    const double c = 0.5 * (d[k] + d[k + 1]) / dx;
    a[k][k] += c / vol[k];
    a[k][k + 1] -= c / vol[k];
    a[k + 1][k + 1] += c / vol[k + 1];
    a[k + 1][k] -= c / vol[k + 1];
  }
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_NEAR(dense.entry(i, j), a[i][j], 1e-12) << i << "," << j;
    }
  }
  EXPECT_DOUBLE_EQ(op.d_min(), 1.0);
}

TEST(Elliptic, RejectsCoefficientBelowFloor) {
  const Grid g = space_grid(1.0, 5);
  const SpatialField z(std::vector<double>{1.0, 1.0, 0.0, 1.0, 1.0});
  try {
    assemble_operator(z, DiffusionLaw::linear(0.0, 1.0), g);
    FAIL() << "expected EllipticityViolation";
  } catch (const EllipticityViolation& e) {
    EXPECT_EQ(e.node(), 2u);
    EXPECT_EQ(e.value(), 0.0);
  }
  const SpatialField negative(std::vector<double>{1.0, 1.0, -2.0, 1.0, 1.0});
  EXPECT_THROW(assemble_operator(negative, DiffusionLaw::linear(0.5, 1.0), g), EllipticityViolation);
}

TEST(Elliptic, ResolventOfConstantIsScaledConstant) {
  const Grid g = space_grid(1.0, 9);
  const SpatialField z = sample_field(g, [](double x) { return x; });
  const auto op = assemble_operator(z, DiffusionLaw::saturating(0.5, 1.0), g);
  const SpatialField u = resolvent_solve(op, 2.0, SpatialField(9, 1.0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_NEAR(u[i], 0.5, 1e-14);
  }
  EXPECT_THROW(resolvent_solve(op, 0.0, SpatialField(9, 1.0)), std::invalid_argument);
}

TEST(Elliptic, ResolventMatchesDenseSolve) {
  const Grid g = space_grid(1.0, 21);
  const SpatialField z = sample_field(g, [](double x) { return std::sin(3.0 * x); });
  const auto op = assemble_operator(z, DiffusionLaw::quadratic(0.2, 1.0), g, cosine_drift(g, 0.7));
  const SpatialField rhs = sample_field(g, [](double x) { return std::exp(x); });
  const SpatialField u = resolvent_solve(op, 0.3, rhs);
  const auto dense = oracle::dense_oracle(op).resolvent(0.3, rhs.values());
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_NEAR(u[i], dense[i], 1e-11 * std::abs(dense[i]));
  }
}

TEST(Elliptic, ResolventPreservesPositivity) {
  const Grid g = space_grid(1.0, 33);
  const auto op = assemble_operator(SpatialField(33, 0.0), DiffusionLaw::constant(1.0), g,
                                    cosine_drift(g, 2.0));
  SpatialField rhs(33, 0.0);
  rhs[5] = 1.0;
  const SpatialField u = resolvent_solve(op, 1e-2, rhs);
  EXPECT_GE(u.min_value(), 0.0);
}

TEST(Elliptic, EigenvaluesMatchCosineModes) {
  const std::size_t n = 17;
  const double length = 2.0;
  const double dx = length / 16.0;
  const Grid g = space_grid(length, n);
  const auto op = assemble_operator(SpatialField(n, 0.0), DiffusionLaw::constant(1.0), g);
  const auto dense = oracle::dense_oracle(op);
  const auto eig = dense.eigenvalues();
  ASSERT_EQ(eig.size(), n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / 16.0;
    EXPECT_NEAR(eig[k], 2.0 / (dx * dx) * (1.0 - std::cos(theta)), 1e-9 * (1.0 + eig[k]));
  }
  const auto v = dense.eigenvector(1);
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = std::cos(std::numbers::pi * static_cast<double>(i) / 16.0);
    EXPECT_NEAR(std::abs(v[i]), std::abs(expected), 1e-10);
  }
  EXPECT_NEAR(eig[1], (std::numbers::pi / length) * (std::numbers::pi / length), 0.01);
}

TEST(Elliptic, OperatorAppliesEigenvector) {
  const std::size_t n = 17;
  const Grid g = space_grid(1.0, n);
  const SpatialField z = sample_field(g, [](double x) { return x * x; });
  const auto op = assemble_operator(z, DiffusionLaw::linear(1.0, 2.0), g);
  const auto dense = oracle::dense_oracle(op);
  const auto eig = dense.eigenvalues();
  const auto v = dense.eigenvector(2);
  const SpatialField av = op.apply(SpatialField(std::vector<double>(v)));
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(av[i], eig[2] * v[i], 1e-9 * eig[2]);
  }
}

TEST(Elliptic, ImplicitStepConservesMass) {
  const Grid g = space_grid(1.0, 33);
  const SpatialField z = sample_field(g, [](double x) { return 1.0 + x; });
  const SpatialField w = sample_field(g, [](double x) { return 2.0 + std::sin(7.0 * x); });
  const auto plain = assemble_operator(z, DiffusionLaw::quadratic(1.0, 1.0), g);
  const auto drifted = assemble_operator(z, DiffusionLaw::quadratic(1.0, 1.0), g, cosine_drift(g, 1.5));
  for (const auto* op : {&plain, &drifted}) {
    const SpatialField out = implicit_step(*op, 0.05, w);
    EXPECT_NEAR(weighted_sum(*op, out), weighted_sum(*op, w), 1e-13 * weighted_sum(*op, w));
    EXPECT_GE(out.min_value(), 0.0);
  }
}

TEST(Elliptic, ImplicitStepIsL2Contractive) {
  const Grid g = space_grid(1.0, 33);
  const SpatialField z = sample_field(g, [](double x) { return std::cos(4.0 * x); });
  const auto op = assemble_operator(z, DiffusionLaw::quadratic(0.5, 1.0), g);
  const SpatialField w = sample_field(g, [](double x) { return std::sin(11.0 * x) - x; });
  const SpatialField out = implicit_step(op, 0.01, w);
  EXPECT_LE(weighted_l2(op, out), weighted_l2(op, w));
}

TEST(Elliptic, SectorProbeQuotientsAreBounded) {
  const Grid g = space_grid(1.0, 33);
  const SpatialField z = sample_field(g, [](double x) { return x; });
  const auto op = assemble_operator(z, DiffusionLaw::quadratic(1.0, 1.0), g);
  const std::vector<double> lambdas{1e-2, 1.0, 1e2, 1e4};
  const SectorProbe probe = sector_probe(op, lambdas, 3, 16);
  ASSERT_EQ(probe.min_quotient.size(), lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    EXPECT_GE(probe.min_quotient[k], 1.0 / std::sqrt(2.0) - 1e-12);
    EXPECT_LE(probe.max_quotient[k], 1.0 + 1e-12);
  }
  EXPECT_LE(probe.kappa, std::sqrt(2.0) + 1e-12);
  EXPECT_GE(probe.kappa, 1.0);
}
