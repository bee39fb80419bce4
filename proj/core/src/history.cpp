#include <cmath>
#include <stdexcept>

#include "agestruct/model.hpp"

namespace agestruct {

std::size_t HistoryBuffer::slice_count(double tau, double dt) {
  if (!(tau > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("history needs tau > 0 and dt > 0");
  }
  return static_cast<std::size_t>(std::ceil(tau / dt - 1e-9)) + 1;
}

HistoryBuffer::HistoryBuffer(double tau, double dt, std::vector<SpatialField> slices)
    : tau_(tau), dt_(dt), slices_(std::move(slices)) {
  if (slices_.size() != slice_count(tau, dt)) {
    throw std::invalid_argument("history buffer needs ceil(tau/dt)+1 slices");
  }
}

HistoryBuffer HistoryBuffer::sample(double tau, const Grid& grid,
                                    const std::function<double(double, double)>& history) {
  const std::size_t m = slice_count(tau, grid.dt());
  std::vector<SpatialField> slices;
  slices.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double s = -static_cast<double>(m - 1 - k) * grid.dt();
    slices.push_back(sample_field(grid, [&](double x) { return history(s, x); }));
  }
  return HistoryBuffer(tau, grid.dt(), std::move(slices));
}

void HistoryBuffer::push(const SpatialField& next) {
  slices_[head_] = next;
  head_ = (head_ + 1) % slices_.size();
}

SpatialField HistoryBuffer::integral() const {
  const std::size_t m = size();
  const std::size_t n = slice(0).size();
  SpatialField out(n);
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const SpatialField& a = slice(k);
    const SpatialField& b = slice(k + 1);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] += 0.5 * dt_ * (a[i] + b[i]);
    }
  }
  const double r = tau_ - static_cast<double>(m - 2) * dt_;
  const double theta = 1.0 - r / dt_;
  const SpatialField& s0 = slice(0);
  const SpatialField& s1 = slice(1);
  for (std::size_t i = 0; i < n; ++i) {
    const double start = s0[i] + theta * (s1[i] - s0[i]);
    out[i] += 0.5 * r * (start + s1[i]);
  }
  return out;
}

bool HistoryBuffer::operator==(const HistoryBuffer& other) const {
  if (tau_ != other.tau_ || dt_ != other.dt_ || size() != other.size()) {
    return false;
  }
  for (std::size_t k = 0; k < size(); ++k) {
    if (!(slice(k) == other.slice(k))) {
      return false;
    }
  }
  return true;
}

}  // namespace agestruct
