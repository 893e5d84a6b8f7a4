#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "torharm/errors.hpp"

namespace torharm {

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  double h_init = 1e-2;
  double h_min = 1e-14;
};

// Dormand-Prince 5(4), FSAL; integrates a vector system through an ordered
// list of checkpoint times, landing on each one exactly
template <class Rhs, class OnCheckpoint>
void integrate_checkpoints(Rhs&& rhs, std::vector<double>& y, double t0,
                           const std::vector<double>& checkpoints,
                           OnCheckpoint&& on_checkpoint,
                           const OdeOptions& opt = {}) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;

  const size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n),
      y5(n);
  double t = t0;
  double h = opt.h_init;
  rhs(t, y.data(), k1.data());

  for (size_t level = 0; level < checkpoints.size(); ++level) {
    double t_end = checkpoints[level];
    while (t < t_end) {
      h = std::min(h, t_end - t);
      if (h < opt.h_min)
        throw StepFailure("step size underflow at t = " + std::to_string(t));

      for (size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
      rhs(t + c2 * h, yt.data(), k2.data());
      for (size_t i = 0; i < n; ++i)
        yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      rhs(t + c3 * h, yt.data(), k3.data());
      for (size_t i = 0; i < n; ++i)
        yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(t + c4 * h, yt.data(), k4.data());
      for (size_t i = 0; i < n; ++i)
        yt[i] = y[i] +
                h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(t + c5 * h, yt.data(), k5.data());
      for (size_t i = 0; i < n; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
      rhs(t + h, yt.data(), k6.data());
      for (size_t i = 0; i < n; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
      rhs(t + h, y5.data(), k7.data());

      double err = 0;
      for (size_t i = 0; i < n; ++i) {
        double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                        e6 * k6[i] + e7 * k7[i]);
        double sc =
            opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
        err = std::max(err, std::fabs(e) / sc);
      }

      if (err <= 1.0) {
        t += h;
        y.swap(y5);
        k1.swap(k7);  // FSAL
      }
      double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
      if (h < opt.h_min)
        throw StepFailure("step size underflow at t = " + std::to_string(t));
    }
    t = t_end;
    on_checkpoint(level, y);
  }
}

}  // namespace torharm
