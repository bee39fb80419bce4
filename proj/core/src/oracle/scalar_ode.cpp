#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agestruct/oracle.hpp"

namespace agestruct::oracle {

OdeResult rk4(const std::function<double(double, double)>& f, double y0, double t_final,
              double dt, double y_max) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("RK4 step must be positive");
  }
  OdeResult r;
  double t = 0.0;
  double y = y0;
  r.trajectory.t.push_back(t);
  r.trajectory.value.push_back(y);
  const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
  for (long long k = 0; k < steps; ++k) {
    const double h = std::min(dt, t_final - t);
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    const double y_next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(y_next) || y_next > y_max) {
      r.blew_up = true;
      r.blowup_time = t + h;
      return r;
    }
    t += h;
    y = y_next;
    r.trajectory.t.push_back(t);
    r.trajectory.value.push_back(y);
  }
  return r;
}

double cubic_blowup_time(double kappa, double p0) { return 1.0 / (2.0 * kappa * p0 * p0); }

}  // namespace agestruct::oracle
