#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "agestruct/error.hpp"
#include "agestruct/oracle.hpp"

using namespace agestruct;
using namespace agestruct::oracle;

namespace {

RenewalProblem constant_rates(double beta, double mu) {
  RenewalProblem p;
  p.birth = [beta](double, double) { return beta; };
  p.mortality = [mu](double, double, double) { return mu; };
  p.u0 = [](double a) { return std::exp(-a); };
  p.a_max = 30.0;
  p.t_final = 1.0;
  p.dt = 1e-3;
  return p;
}

FrozenEllipticOperator sample_operator(std::size_t n, bool drift) {
  const Grid g = Grid::from_step(1.0, 1.0, n, 0.1, 0.1);
  const SpatialField z = sample_field(g, [](double x) { return std::sin(2.0 * x); });
  std::optional<DriftField> d;
  if (drift) {
    d = DriftField{sample_field(g, [](double x) { return x * x; }), [](double) { return 0.8; }};
  }
  return assemble_operator(z, DiffusionLaw::quadratic(1.0, 1.0), g, d);
}

}  // namespace

TEST(RenewalOracle, UnitBirthGrowsLikeExponential) {
  const Trajectory tr = renewal_oracle(constant_rates(1.0, 0.0));
  const double p0 = tr.value.front();
  EXPECT_NEAR(tr.at(1.0) / p0, std::numbers::e, 1e-3 * std::numbers::e);
}

TEST(RenewalOracle, ConstantRatesGiveNetExponent) {
  const Trajectory tr = renewal_oracle(constant_rates(0.7, 0.3));
  const double p0 = tr.value.front();
  for (double t : {0.25, 0.5, 1.0}) {
    EXPECT_NEAR(tr.at(t) / p0, std::exp(0.4 * t), 1e-3);
  }
}

TEST(RenewalOracle, NoBirthsIsNonIncreasing) {
  RenewalProblem p = constant_rates(0.0, 0.0);
  p.mortality = [](double, double a, double) { return 0.1 * a; };
  const Trajectory tr = renewal_oracle(p);
  for (std::size_t n = 1; n < tr.value.size(); ++n) {
    EXPECT_LE(tr.value[n], tr.value[n - 1]);
  }
  const double survived = std::exp(-0.05) / 1.1;
  EXPECT_NEAR(tr.at(1.0), survived, 1e-6);
}

TEST(RenewalOracle, TrajectoryCsv) {
  Trajectory tr;
  tr.t = {0.0, 0.5};
  tr.value = {1.0, 2.0};
  EXPECT_DOUBLE_EQ(tr.at(0.25), 1.5);
  EXPECT_DOUBLE_EQ(tr.at(2.0), 2.0);
  std::ostringstream out;
  tr.write_csv(out);
  EXPECT_EQ(out.str().substr(0, 4), "t,P\n");
}

TEST(DenseOracle, BandedAndDenseApplicationAgree) {
  const auto op = sample_operator(33, true);
  const DenseOperator dense(op);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> w(33);
  for (double& v : w) {
    v = d(rng);
  }
  std::vector<double> banded(33);
  op.apply(w, banded);
  const auto full = dense.apply(w);
  double scale = 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    scale = std::max(scale, std::abs(full[i]));
    diff = std::max(diff, std::abs(full[i] - banded[i]));
  }
  EXPECT_LE(diff, 1e-13 * scale);
}

TEST(DenseOracle, NeumannOperatorHasConstantNullVector) {
  const DenseOperator dense(sample_operator(33, false));
  const auto eig = dense.eigenvalues();
  EXPECT_NEAR(eig.front(), 0.0, 1e-10);
  EXPECT_GT(eig[1], 1.0);
  for (double v : dense.eigenvector(0)) {
    EXPECT_NEAR(std::abs(v), 1.0, 1e-10);
  }
}

TEST(DenseOracle, DriftKeepsSpectrumNonnegative) {
  const DenseOperator dense(sample_operator(33, true));
  const auto eig = dense.eigenvalues();
  EXPECT_NEAR(eig.front(), 0.0, 1e-9);
  for (std::size_t k = 1; k < eig.size(); ++k) {
    EXPECT_GE(eig[k], eig[k - 1]);
  }
}

TEST(DenseOracle, ResolventAndPowerMatchBandedSolves) {
  const auto op = sample_operator(33, true);
  const DenseOperator dense(op);
  const Grid g = Grid::from_step(1.0, 1.0, 33, 0.1, 0.1);
  const SpatialField rhs = sample_field(g, [](double x) { return 1.0 + x * x * x; });
  const SpatialField banded = resolvent_solve(op, 0.5, rhs);
  const auto full = dense.resolvent(0.5, rhs.values());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    EXPECT_NEAR(banded[i], full[i], 1e-10 * std::abs(full[i]));
  }
  SpatialField stepped = rhs;
  for (int k = 0; k < 5; ++k) {
    stepped = implicit_step(op, 0.01, stepped);
  }
  const auto powered = dense.implicit_power(0.01, 5, rhs.values());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    EXPECT_NEAR(stepped[i], powered[i], 1e-10 * std::abs(powered[i]));
  }
}

TEST(DenseOracle, SizeGuard) {
  EXPECT_THROW(DenseOperator(sample_operator(257, false)), std::length_error);
  EXPECT_NO_THROW(DenseOperator(sample_operator(256, false)));
}

TEST(SelfConvergence, FirstOrderSequence) {
  const auto solve = [](int r) {
    const double h = 0.1 / std::pow(2.0, r);
    return std::vector<double>{1.0 + h, 2.0 - 3.0 * h};
  };
  const ConvergenceResult c = self_convergence(solve);
  EXPECT_NEAR(c.order, 1.0, 1e-12);
  EXPECT_FALSE(c.degenerate);
  EXPECT_NEAR(c.coarse_difference, 0.15, 1e-12);
}

TEST(SelfConvergence, ExactSequenceIsDegenerate) {
  const ConvergenceResult c = self_convergence([](int) { return std::vector<double>{1.0, 2.0}; });
  EXPECT_TRUE(c.degenerate);
  EXPECT_TRUE(std::isnan(c.order));
}

TEST(SelfConvergence, GrowingDifferencesThrow) {
  const auto solve = [](int r) { return std::vector<double>{std::pow(2.0, r) * 0.1}; };
  EXPECT_THROW(self_convergence(solve), NonMonotoneError);
}

TEST(ScalarOde, Rk4MatchesExponential) {
  const OdeResult r = rk4([](double, double y) { return -2.0 * y; }, 1.0, 1.0, 1e-2);
  EXPECT_FALSE(r.blew_up);
  EXPECT_NEAR(r.trajectory.value.back(), std::exp(-2.0), 1e-9);
  EXPECT_NEAR(r.trajectory.t.back(), 1.0, 1e-12);
}

TEST(ScalarOde, CubicBlowupTime) {
  const double kappa = 2.0;
  const double p0 = 0.5;
  EXPECT_DOUBLE_EQ(cubic_blowup_time(kappa, p0), 1.0);
  const OdeResult r =
      rk4([kappa](double, double y) { return kappa * y * y * y; }, p0, 2.0, 1e-4, 1e6);
  EXPECT_TRUE(r.blew_up);
  EXPECT_NEAR(r.blowup_time, 1.0, 1e-3);
}
