#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "torharm/errors.hpp"
#include "torharm/harmonic.hpp"
#include "torharm/neumann.hpp"
#include "torharm/spectral.hpp"
#include "torharm/surface.hpp"

namespace torharm {

// circular-section torus of revolution, the closed-form reference geometry
struct AxisymTorus {
  double R_T;
  double r_P;

  AxisymTorus(double major, double minor) : R_T(major), r_P(minor) {
    if (!(0 < r_P && r_P < R_T))
      throw ConfigError("axisym torus needs 0 < r_P < R_T");
  }

  double R(double theta) const { return R_T + r_P * std::cos(kTwoPi * theta); }

  FourierSurface make_surface(int n_phi, int n_theta,
                              const SurfaceOptions& opt = {}) const {
    std::vector<FourierMode> modes = {
        {1, 0, {R_T, 0, 0}, {0, R_T, 0}},
        {1, 1, {r_P / 2, 0, 0}, {0, r_P / 2, 0}},
        {1, -1, {r_P / 2, 0, 0}, {0, r_P / 2, 0}},
        {0, 1, {0, 0, 0}, {0, 0, r_P}},
    };
    return build_surface(std::move(modes), n_phi, n_theta, opt);
  }
};

// axisym torus plus a cross-sectional radial ripple
// amp cos(2 pi (m phi + n theta)) (cos(2 pi theta) e_rho + sin(2 pi theta) e_z);
// band-limited, so the grid samples refit exactly
inline FourierSurface perturbed_torus(const AxisymTorus& t, double amp, int m,
                                      int n, int n_phi, int n_theta,
                                      const SurfaceOptions& opt = {}) {
  Grid2 gx(n_phi, n_theta), gy(n_phi, n_theta), gz(n_phi, n_theta);
  for (int i = 0; i < n_phi; ++i) {
    double phi = static_cast<double>(i) / n_phi;
    for (int j = 0; j < n_theta; ++j) {
      double theta = static_cast<double>(j) / n_theta;
      double r = t.r_P + amp * std::cos(kTwoPi * (m * phi + n * theta));
      double R = t.R_T + r * std::cos(kTwoPi * theta);
      gx(i, j) = R * std::cos(kTwoPi * phi);
      gy(i, j) = R * std::sin(kTwoPi * phi);
      gz(i, j) = r * std::sin(kTwoPi * theta);
    }
  }
  auto cx = fft2(gx);
  auto cy = fft2(gy);
  auto cz = fft2(gz);
  std::vector<FourierMode> modes;
  for (int k0 = 0; k0 < n_phi; ++k0)
    for (int k1 = 0; k1 < n_theta; ++k1) {
      int p0 = (n_phi - k0) % n_phi, p1 = (n_theta - k1) % n_theta;
      bool self = (p0 == k0 && p1 == k1);
      if (!self && std::make_pair(k0, k1) > std::make_pair(p0, p1)) continue;
      size_t id = static_cast<size_t>(k0) * n_theta + k1;
      FourierMode md;
      md.m = dft_freq(k0, n_phi);
      md.n = dft_freq(k1, n_theta);
      md.c = Vec3{cx[id].real(), cy[id].real(), cz[id].real()};
      md.s = Vec3{-cx[id].imag(), -cy[id].imag(), -cz[id].imag()};
      if (!self) {
        md.c = 2.0 * md.c;
        md.s = 2.0 * md.s;
      } else {
        md.s = Vec3{};
      }
      if (std::max({std::fabs(md.c.x), std::fabs(md.c.y), std::fabs(md.c.z),
                    std::fabs(md.s.x), std::fabs(md.s.y), std::fabs(md.s.z)}) >
          1e-13 * (t.R_T + t.r_P))
        modes.push_back(md);
    }
  return build_surface(std::move(modes), n_phi, n_theta, opt);
}

// closed-form metric and harmonic field on the n_phi x n_theta grid
inline std::pair<MetricData, HarmonicBoundaryField> exact_fields(
    const AxisymTorus& t, int n_phi, int n_theta) {
  MetricData m;
  m.g_phiphi = Grid2(n_phi, n_theta);
  m.g_phitheta = Grid2(n_phi, n_theta);
  m.g_thetatheta = Grid2(n_phi, n_theta);
  m.sqrt_g = Grid2(n_phi, n_theta);
  m.normal = VecGrid2(n_phi, n_theta);
  m.II_phiphi = Grid2(n_phi, n_theta);
  m.II_phitheta = Grid2(n_phi, n_theta);
  m.II_thetatheta = Grid2(n_phi, n_theta);

  HarmonicBoundaryField h;
  h.B = TangentField(n_phi, n_theta);
  h.chi_correction.density = Grid2(n_phi, n_theta);
  h.chi_correction.trace = Grid2(n_phi, n_theta);
  h.chi_correction.normal_flux = Grid2(n_phi, n_theta);
  h.chi_correction.datum = Grid2(n_phi, n_theta);
  h.chi_correction.grad_tangential = TangentField(n_phi, n_theta);
  h.max_circulation_drift = 0.0;

  double four_pi2 = kTwoPi * kTwoPi;
  for (int i = 0; i < n_phi; ++i) {
    double phit = kTwoPi * i / n_phi;
    for (int j = 0; j < n_theta; ++j) {
      double thetat = kTwoPi * j / n_theta;
      double R = t.R_T + t.r_P * std::cos(thetat);
      m.g_phiphi(i, j) = four_pi2 * R * R;
      m.g_thetatheta(i, j) = four_pi2 * t.r_P * t.r_P;
      m.sqrt_g(i, j) = four_pi2 * t.r_P * R;
      m.normal.set(i, j, Vec3{std::cos(thetat) * std::cos(phit),
                              std::cos(thetat) * std::sin(phit),
                              std::sin(thetat)});
      m.II_phiphi(i, j) = -four_pi2 * R * std::cos(thetat);
      m.II_thetatheta(i, j) = -four_pi2 * t.r_P;
      h.B.v_phi(i, j) = 1.0 / (four_pi2 * R * R);
    }
  }
  double Rmax = t.R_T + t.r_P;
  h.b_phi_min = 1.0 / (four_pi2 * Rmax * Rmax);
  h.min_i = 0;
  h.min_j = 0;
  return {std::move(m), std::move(h)};
}

// Pi'(theta) = (R(theta)^2 / r_P^2) int_0^1 d_theta u_V(phi, theta) dphi
inline std::vector<double> closed_form_pi_prime(const AxisymTorus& t,
                                                const NeumannSolution& uV) {
  Grid2 du = deriv_theta(uV.trace);
  int np = du.n_phi, nt = du.n_theta;
  std::vector<double> out(nt);
  for (int j = 0; j < nt; ++j) {
    double acc = 0;
    for (int i = 0; i < np; ++i) acc += du(i, j);
    double R = t.R(static_cast<double>(j) / nt);
    out[j] = (R * R) / (t.r_P * t.r_P) * acc / np;
  }
  return out;
}

// max over theta of |int_0^1 grad u_V . n dphi|, taken from the solver's
// boundary flux so no interior evaluation is needed
inline double toroidal_flux_average(const NeumannSolution& uV) {
  const Grid2& flux = uV.normal_flux;
  double worst = 0;
  for (int j = 0; j < flux.n_theta; ++j) {
    double acc = 0;
    for (int i = 0; i < flux.n_phi; ++i) acc += flux(i, j);
    worst = std::max(worst, std::fabs(acc / flux.n_phi));
  }
  return worst;
}

// residual of int f u_V dS = (mean f)(int u_V dS) for phi-independent f,
// relative to ||f|| ||u_V|| in L^2(dS)
inline double averaging_residual(const MetricData& m, const NeumannSolution& uV,
                                 const Grid2& f) {
  const Grid2& u = uV.trace;
  double cell = 1.0 / (static_cast<double>(f.n_phi) * f.n_theta);
  double I_fu = 0, I_f = 0, I_u = 0, area = 0, nf2 = 0, nu2 = 0;
  for (size_t k = 0; k < f.v.size(); ++k) {
    double w = m.sqrt_g.v[k] * cell;
    I_fu += f.v[k] * u.v[k] * w;
    I_f += f.v[k] * w;
    I_u += u.v[k] * w;
    area += w;
    nf2 += f.v[k] * f.v[k] * w;
    nu2 += u.v[k] * u.v[k] * w;
  }
  double denom = std::sqrt(nf2 * nu2);
  if (denom == 0) return 0;
  return std::fabs(I_fu - (I_f / area) * I_u) / denom;
}

// phi-independent peaked profile used by the averaging checks:
// R(theta) f = C sum_k exp(-(theta - theta0 - k)^2 / (2 eps^2)), normalized
// so that int f dS = 1
inline Grid2 gaussian_theta_profile(const AxisymTorus& t, double theta0,
                                    double eps, int n_phi, int n_theta) {
  std::vector<double> prof(n_theta);
  double mass = 0;
  for (int j = 0; j < n_theta; ++j) {
    double theta = static_cast<double>(j) / n_theta;
    double s = 0;
    for (int k = -3; k <= 3; ++k) {
      double d = theta - theta0 - k;
      s += std::exp(-d * d / (2.0 * eps * eps));
    }
    prof[j] = s / t.R(theta);
    mass += kTwoPi * kTwoPi * t.r_P * t.R(theta) * prof[j] / n_theta;
  }
  Grid2 f(n_phi, n_theta);
  for (int i = 0; i < n_phi; ++i)
    for (int j = 0; j < n_theta; ++j) f(i, j) = prof[j] / mass;
  return f;
}

}  // namespace torharm
