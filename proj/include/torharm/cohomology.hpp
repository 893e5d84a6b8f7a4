#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "torharm/errors.hpp"
#include "torharm/harmonic.hpp"
#include "torharm/shape.hpp"
#include "torharm/spectral.hpp"
#include "torharm/surface.hpp"

namespace torharm {

struct DiophantineWitness {
  double omega = 0;
  double C = 0;
  double tau = 0;
  long q_max = 0;
  double best_C = 0;           // min over q of dist(omega q, Z) q^tau
  double best_C_discrete = 0;  // min over q of |e^{2 pi i omega q} - 1| q^tau
  long argmin_q = 0;
};

// verify dist(omega q, Z) >= C q^-tau for q = 1..q_max
inline DiophantineWitness check_diophantine(double omega, double C, double tau,
                                            long q_max) {
  if (!(C > 0) || !(tau > 0) || q_max < 1)
    throw ConfigError("diophantine check needs C > 0, tau > 0, q_max >= 1");
  DiophantineWitness w;
  w.omega = omega;
  w.C = C;
  w.tau = tau;
  w.q_max = q_max;
  w.best_C = std::numeric_limits<double>::infinity();
  w.best_C_discrete = w.best_C;
  for (long q = 1; q <= q_max; ++q) {
    double x = omega * q;
    double d = std::fabs(x - std::round(x));
    double scale = std::pow(static_cast<double>(q), tau);
    if (d * scale < w.best_C) {
      w.best_C = d * scale;
      w.argmin_q = q;
    }
    w.best_C_discrete =
        std::min(w.best_C_discrete, 2.0 * std::sin(kPi * d) * scale);
    if (d < C * std::pow(static_cast<double>(q), -tau))
      throw NotDiophantineUpTo(
          q, "dist(" + std::to_string(omega) + " * " + std::to_string(q) +
                 ", Z) = " + std::to_string(d) + " < C q^-tau");
  }
  return w;
}

// function on the 2-torus held as normalized DFT coefficients,
// f = sum c_k exp(2 pi i (m phi + n theta))
struct TorusFunction {
  int n_phi = 0, n_theta = 0;
  std::vector<std::complex<double>> c;

  TorusFunction() = default;
  TorusFunction(int np, int nt)
      : n_phi(np), n_theta(nt), c(static_cast<size_t>(np) * nt, 0.0) {}
  explicit TorusFunction(const Grid2& g)
      : n_phi(g.n_phi), n_theta(g.n_theta), c(fft2(g)) {}

  std::complex<double>& at(int k0, int k1) {
    return c[static_cast<size_t>(k0) * n_theta + k1];
  }
  const std::complex<double>& at(int k0, int k1) const {
    return c[static_cast<size_t>(k0) * n_theta + k1];
  }
  Grid2 to_grid() const { return ifft2(c, n_phi, n_theta); }
  double coeff_scale() const {
    double s = 0;
    for (auto& z : c) s = std::max(s, std::abs(z));
    return s;
  }
};

namespace detail {

// Nyquist bins have no conjugate partner at this resolution; the small-divisor
// algebra below needs both signed frequencies separately, so require them empty
inline void require_no_nyquist(TorusFunction& f, const char* who) {
  double tol = 1e-13 * std::max(f.coeff_scale(), 1e-300);
  auto check = [&](std::complex<double>& z) {
    if (std::abs(z) > tol)
      throw ConfigError(std::string(who) +
                        ": spectrum touches the Nyquist band");
    z = 0.0;
  };
  if (f.n_phi % 2 == 0)
    for (int k1 = 0; k1 < f.n_theta; ++k1) check(f.at(f.n_phi / 2, k1));
  if (f.n_theta % 2 == 0)
    for (int k0 = 0; k0 < f.n_phi; ++k0) check(f.at(k0, f.n_theta / 2));
}

}  // namespace detail

// solve <(1, omega), grad psi> = Phi on the 2-torus; Phi must have zero mean
inline TorusFunction solve_cohomological(const TorusFunction& Phi, double omega,
                                         double divisor_floor = 1e-8) {
  TorusFunction psi = Phi;
  detail::require_no_nyquist(psi, "solve_cohomological");
  double scale = std::max(psi.coeff_scale(), 1e-300);
  if (std::abs(psi.at(0, 0)) > 1e-12 * scale)
    throw NonzeroAverage("cohomological datum has mean " +
                         std::to_string(psi.at(0, 0).real()));
  psi.at(0, 0) = 0.0;
  for (int k0 = 0; k0 < psi.n_phi; ++k0)
    for (int k1 = 0; k1 < psi.n_theta; ++k1) {
      if (k0 == 0 && k1 == 0) continue;
      std::complex<double>& z = psi.at(k0, k1);
      if (z == 0.0) continue;
      double div = dft_freq(k0, psi.n_phi) + omega * dft_freq(k1, psi.n_theta);
      if (std::fabs(div) < divisor_floor)
        throw SmallDivisorOverflow("divisor " + std::to_string(div) +
                                   " at mode (" +
                                   std::to_string(dft_freq(k0, psi.n_phi)) +
                                   ", " +
                                   std::to_string(dft_freq(k1, psi.n_theta)) +
                                   ") below floor");
      z /= std::complex<double>(0.0, kTwoPi * div);
    }
  return psi;
}

// lift circle data mu(theta) to Phi on the 2-torus with only m = 0 modes,
// Phi_n = 2 pi i n omega / (e^{2 pi i n omega} - 1) mu_n, so that averaging
// along the linear flow returns mu exactly
inline TorusFunction mu_to_Phi(const std::vector<double>& mu, double omega,
                               int n_phi) {
  int nt = static_cast<int>(mu.size());
  auto cm = fft1(mu);
  TorusFunction Phi(n_phi, nt);
  for (int k1 = 0; k1 < nt; ++k1) {
    int n = dft_freq(k1, nt);
    if (2 * n == nt) {
      if (std::abs(cm[k1]) > 1e-13 * std::max(1.0, std::abs(cm[0])))
        throw ConfigError("mu_to_Phi: data touches the Nyquist mode");
      continue;
    }
    Phi.at(0, k1) = cm[k1] / detail::mode_average_factor(n * omega);
  }
  return Phi;
}

// average of Phi along the orbits phi -> (phi, theta + omega phi), as a
// function of theta; the adjoint partner of mu_to_Phi
inline std::vector<double> averaging_operator(const TorusFunction& Phi,
                                              double omega) {
  int np = Phi.n_phi, nt = Phi.n_theta;
  std::vector<std::complex<double>> mu(nt, 0.0);
  for (int k0 = 0; k0 < np; ++k0) {
    int m = dft_freq(k0, np);
    int reps0 = (2 * std::abs(m) == np) ? 2 : 1;
    for (int k1 = 0; k1 < nt; ++k1) {
      int n = dft_freq(k1, nt);
      int reps1 = (2 * std::abs(n) == nt) ? 2 : 1;
      std::complex<double> coef = Phi.at(k0, k1);
      if (coef == 0.0) continue;
      coef /= static_cast<double>(reps0 * reps1);
      for (int s0 = 0; s0 < reps0; ++s0)
        for (int s1 = 0; s1 < reps1; ++s1)
          mu[k1] += coef * detail::mode_average_factor((s0 == 0 ? m : -m) +
                                                       (s1 == 0 ? n : -n) *
                                                           omega);
    }
  }
  return ifft1(std::move(mu));
}

struct TangentialGenerator {
  TangentField V_Gamma;  // the deformation -psi d_theta
  std::vector<double> psi;
  TorusFunction Phi;
};

// construct the tangential deformation whose linearized Poincare derivative
// is exactly mu: psi_n = mu_n / (e^{2 pi i n omega} - 1), V = -psi d_theta
inline TangentialGenerator tangential_deformation_from_mu(
    const std::vector<double>& mu, double omega, int n_phi,
    double divisor_floor = 1e-8) {
  int nt = static_cast<int>(mu.size());
  TangentialGenerator g;
  g.Phi = mu_to_Phi(mu, omega, n_phi);
  TorusFunction psi2 = solve_cohomological(g.Phi, omega, divisor_floor);
  std::vector<std::complex<double>> ps(nt);
  for (int k1 = 0; k1 < nt; ++k1) ps[k1] = psi2.at(0, k1);
  g.psi = ifft1(std::move(ps));
  g.V_Gamma = TangentField(n_phi, nt);
  for (int i = 0; i < n_phi; ++i)
    for (int j = 0; j < nt; ++j) g.V_Gamma.v_theta(i, j) = -g.psi[j];
  return g;
}

// derivative field of a tangential deformation of the flat linear model
// X = d_phi + omega d_theta:  x' = <(1, omega), grad(omega V^phi - V^theta)>
inline Grid2 flat_model_x_prime(double omega, const TangentField& VG) {
  Grid2 w(VG.v_phi.n_phi, VG.v_phi.n_theta);
  for (size_t k = 0; k < w.v.size(); ++k)
    w.v[k] = omega * VG.v_phi.v[k] - VG.v_theta.v[k];
  Grid2 wp = deriv_phi(w), wt = deriv_theta(w);
  for (size_t k = 0; k < w.v.size(); ++k) w.v[k] = wp.v[k] + omega * wt.v[k];
  return w;
}

// the normal deformation f = 1 / (sqrt_g B^phi): its derivative datum
// div_Gamma(f B) vanishes identically, and the resulting Pi' supplies the
// average direction missed by tangential generators
inline DeformationField normal_average_generator(const MetricData& m,
                                                 const HarmonicBoundaryField& h) {
  int np = m.sqrt_g.n_phi, nt = m.sqrt_g.n_theta;
  DeformationField V;
  V.f = Grid2(np, nt);
  V.vg_phi = Grid2(np, nt);
  V.vg_theta = Grid2(np, nt);
  for (size_t k = 0; k < V.f.v.size(); ++k)
    V.f.v[k] = 1.0 / (m.sqrt_g.v[k] * h.B.v_phi.v[k]);
  return V;
}

}  // namespace torharm
