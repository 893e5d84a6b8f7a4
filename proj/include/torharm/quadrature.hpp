#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace torharm {

// Gauss-Legendre nodes/weights on [-1,1], Newton on P_n with the usual
// Chebyshev initial guess
inline void gauss_legendre(int n, std::vector<double>& x,
                           std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    double ww = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = ww;
    w[n - 1 - i] = ww;
  }
}

inline void gauss_legendre_ab(int n, double a, double b, std::vector<double>& x,
                              std::vector<double>& w) {
  gauss_legendre(n, x, w);
  double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + hl * x[i];
    w[i] *= hl;
  }
}

namespace detail {

// d/dt and d3/dt3 at the left end of a uniform table (h = 1), 5-point stencils
inline double left_d1(const double* f) {
  return -25.0 / 12.0 * f[0] + 4.0 * f[1] - 3.0 * f[2] + 4.0 / 3.0 * f[3] -
         0.25 * f[4];
}
inline double left_d3(const double* f) {
  return -2.5 * f[0] + 9.0 * f[1] - 12.0 * f[2] + 7.0 * f[3] - 1.5 * f[4];
}

// integral over [0,k] (k = 1..3, h = 1) of the degree-4 interpolant through
// nodes 0..4; weights built once from exact Lagrange integrals
inline const std::array<std::array<double, 5>, 3>& startup_weights() {
  static const std::array<std::array<double, 5>, 3> table = [] {
    std::array<std::array<double, 5>, 3> t{};
    std::vector<double> gx, gw;
    gauss_legendre(4, gx, gw);
    for (int k = 1; k <= 3; ++k) {
      for (int j = 0; j < 5; ++j) {
        double acc = 0;
        for (size_t q = 0; q < gx.size(); ++q) {
          double s = 0.5 * k * (gx[q] + 1.0);
          double lj = 1.0;
          for (int i = 0; i < 5; ++i)
            if (i != j) lj *= (s - i) / (j - i);
          acc += 0.5 * k * gw[q] * lj;
        }
        t[k - 1][j] = acc;
      }
    }
    return t;
  }();
  return table;
}

}  // namespace detail

// cumulative integral C_k = int_{x0}^{x0+k h} f on a uniform table including
// both endpoints; trapezoid plus order-6 Gregory endpoint corrections
inline std::vector<double> cumulative_integral(const std::vector<double>& f,
                                               double h) {
  size_t m = f.size();
  std::vector<double> c(m, 0.0);
  if (m < 2) return c;
  if (m < 5) {  // short tables: plain trapezoid
    for (size_t k = 1; k < m; ++k)
      c[k] = c[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return c;
  }
  std::vector<double> trap(m, 0.0);
  for (size_t k = 1; k < m; ++k)
    trap[k] = trap[k - 1] + 0.5 * (f[k - 1] + f[k]);
  double d1_0 = detail::left_d1(f.data());
  double d3_0 = detail::left_d3(f.data());
  const auto& sw = detail::startup_weights();
  for (size_t k = 1; k < m; ++k) {
    if (k < 4) {
      double acc = 0;
      for (int j = 0; j < 5; ++j) acc += sw[k - 1][j] * f[j];
      c[k] = h * acc;
      continue;
    }
    // right-end derivatives from backward stencils at node k
    double fr[5] = {f[k], f[k - 1], f[k - 2], f[k - 3], f[k - 4]};
    double d1_k = -detail::left_d1(fr);
    double d3_k = -detail::left_d3(fr);
    c[k] = h * (trap[k] - (d1_k - d1_0) / 12.0 + (d3_k - d3_0) / 720.0);
  }
  return c;
}

inline double integrate_uniform(const std::vector<double>& f, double h) {
  return cumulative_integral(f, h).back();
}

// integral over one period of a uniformly sampled periodic function
// (trapezoid = spectrally exact here)
inline double periodic_integral(const std::vector<double>& f,
                                double period = 1.0) {
  double s = 0;
  for (double x : f) s += x;
  return s * period / static_cast<double>(f.size());
}

}  // namespace torharm
