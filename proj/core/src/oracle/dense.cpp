#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "agestruct/oracle.hpp"

namespace agestruct::oracle {

struct DenseOperator::Impl {
  Eigen::MatrixXd a;
  Eigen::VectorXd vol;
  bool symmetric_in_volume = true;
};

DenseOperator::DenseOperator(const FrozenEllipticOperator& op) : impl_(std::make_unique<Impl>()) {
  const std::size_t n = op.size();
  if (n > 256) {
    throw std::length_error("dense oracle limited to 256 nodes");
  }
  const auto& m = op.matrix();
  const auto ni = static_cast<Eigen::Index>(n);
  impl_->a = Eigen::MatrixXd::Zero(ni, ni);
  impl_->vol.resize(ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    const auto k = static_cast<std::size_t>(i);
    impl_->a(i, i) = m.diag[k];
    if (i > 0) {
      impl_->a(i, i - 1) = m.lower[k];
    }
    if (i + 1 < ni) {
      impl_->a(i, i + 1) = m.upper[k];
    }
    impl_->vol(i) = op.volumes()[k];
  }
  impl_->symmetric_in_volume = !op.has_drift();
}

DenseOperator::~DenseOperator() = default;
DenseOperator::DenseOperator(DenseOperator&&) noexcept = default;
DenseOperator& DenseOperator::operator=(DenseOperator&&) noexcept = default;

std::size_t DenseOperator::size() const noexcept { return static_cast<std::size_t>(impl_->a.rows()); }

double DenseOperator::entry(std::size_t i, std::size_t j) const {
  return impl_->a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

namespace {

Eigen::VectorXd to_eigen(std::span<const double> w) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = w[i];
  }
  return v;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::vector<double> DenseOperator::apply(std::span<const double> w) const {
  return to_std(impl_->a * to_eigen(w));
}

std::vector<double> DenseOperator::eigenvalues() const {
  std::vector<double> out;
  if (impl_->symmetric_in_volume) {
    // W^{1/2} A W^{-1/2} is symmetric.
    const Eigen::VectorXd s = impl_->vol.cwiseSqrt();
    const Eigen::MatrixXd sym = s.asDiagonal() * impl_->a * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
    out = to_std(es.eigenvalues());
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(impl_->a);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      out.push_back(es.eigenvalues()(k).real());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> DenseOperator::eigenvector(std::size_t k) const {
  if (!impl_->symmetric_in_volume) {
    throw std::logic_error("eigenvectors are only provided for drift-free operators");
  }
  const Eigen::VectorXd s = impl_->vol.cwiseSqrt();
  const Eigen::MatrixXd sym = s.asDiagonal() * impl_->a * s.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
  Eigen::VectorXd v = s.cwiseInverse().asDiagonal() * es.eigenvectors().col(static_cast<Eigen::Index>(k));
  const double scale = v.cwiseAbs().maxCoeff();
  v /= scale;
  return to_std(v);
}

std::vector<double> DenseOperator::resolvent(double lambda, std::span<const double> rhs) const {
  const Eigen::Index n = impl_->a.rows();
  const Eigen::MatrixXd m = lambda * Eigen::MatrixXd::Identity(n, n) + impl_->a;
  return to_std(m.fullPivLu().solve(to_eigen(rhs)));
}

std::vector<double> DenseOperator::implicit_power(double dt, std::size_t steps,
                                                  std::span<const double> w) const {
  const Eigen::Index n = impl_->a.rows();
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) + dt * impl_->a;
  const auto lu = m.fullPivLu();
  Eigen::VectorXd v = to_eigen(w);
  for (std::size_t k = 0; k < steps; ++k) {
    v = lu.solve(v);
  }
  return to_std(v);
}

DenseOperator dense_oracle(const FrozenEllipticOperator& op) { return DenseOperator(op); }

}  // namespace agestruct::oracle
