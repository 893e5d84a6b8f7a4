#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "torharm/errors.hpp"
#include "torharm/harmonic.hpp"
#include "torharm/neumann.hpp"
#include "torharm/parallel.hpp"
#include "torharm/poincare.hpp"
#include "torharm/quadrature.hpp"
#include "torharm/spectral.hpp"
#include "torharm/surface.hpp"

namespace torharm {

struct ShapeDerivativeResult {
  NeumannSolution uV;
  Grid2 X_prime_theta;
  std::vector<double> Pi_prime;
  std::string method_tag;
};

// boundary datum of the derivative potential: g = div_Gamma( (V.n) B )
inline Grid2 uV_datum(const MetricData& m, const TangentField& B,
                      const DeformationField& V) {
  TangentField fB(B.v_phi.n_phi, B.v_phi.n_theta);
  for (size_t k = 0; k < fB.v_phi.size(); ++k) {
    fB.v_phi.v[k] = V.f.v[k] * B.v_phi.v[k];
    fB.v_theta.v[k] = V.f.v[k] * B.v_theta.v[k];
  }
  return surface_divergence(m, fB);
}

// theta component of the normalized field's shape derivative, assembled from
// boundary data only:
//   (X'_V)^theta = [ 2 f II(B, Bperp) + Bperp.[V_Gamma, B] + Bperp.grad uV ]
//                  / (sqrt_g (B^phi)^2)
inline Grid2 x_prime_theta(const MetricData& m, const HarmonicBoundaryField& h,
                           const DeformationField& V,
                           const NeumannSolution& uV) {
  if (!(h.b_phi_min > 0))
    throw NotTransverse("B^phi attains " + std::to_string(h.b_phi_min));
  const TangentField& B = h.B;
  int np = B.v_phi.n_phi, nt = B.v_phi.n_theta;
  TangentField Bperp = perp(B, m);

  Grid2 two_f_II = II_bilinear(m, B, Bperp);
  for (size_t k = 0; k < two_f_II.v.size(); ++k)
    two_f_II.v[k] *= 2.0 * V.f.v[k];

  // intrinsic bracket [V_Gamma, B]^a = VG^b d_b B^a - B^b d_b VG^a
  Grid2 Bp_p = deriv_phi(B.v_phi), Bp_t = deriv_theta(B.v_phi);
  Grid2 Bt_p = deriv_phi(B.v_theta), Bt_t = deriv_theta(B.v_theta);
  Grid2 Vp_p = deriv_phi(V.vg_phi), Vp_t = deriv_theta(V.vg_phi);
  Grid2 Vt_p = deriv_phi(V.vg_theta), Vt_t = deriv_theta(V.vg_theta);
  TangentField br(np, nt);
  for (size_t k = 0; k < br.v_phi.size(); ++k) {
    br.v_phi.v[k] = V.vg_phi.v[k] * Bp_p.v[k] + V.vg_theta.v[k] * Bp_t.v[k] -
                    B.v_phi.v[k] * Vp_p.v[k] - B.v_theta.v[k] * Vp_t.v[k];
    br.v_theta.v[k] = V.vg_phi.v[k] * Bt_p.v[k] + V.vg_theta.v[k] * Bt_t.v[k] -
                      B.v_phi.v[k] * Vt_p.v[k] - B.v_theta.v[k] * Vt_t.v[k];
  }
  Grid2 bracket_term = g_inner(m, Bperp, br);
  Grid2 grad_term = g_inner(m, Bperp, uV.grad_tangential);

  Grid2 r(np, nt);
  for (size_t k = 0; k < r.v.size(); ++k) {
    double bp = B.v_phi.v[k];
    r.v[k] = (two_f_II.v[k] + bracket_term.v[k] + grad_term.v[k]) /
             (m.sqrt_g.v[k] * bp * bp);
  }
  return r;
}

// Duhamel assembly: Pi'(theta) = int_0^1 T(phi,theta) X'(phi, Pi^phi(theta)) dphi
inline std::vector<double> pi_prime_duhamel(const FlowTable& flow,
                                            const TransitionTable& T,
                                            const Grid2& x_prime) {
  TrigEval2 xev(x_prime);
  size_t L1 = flow.phi_levels.size();
  size_t nt = flow.values[0].size();
  std::vector<std::vector<double>> s(L1, std::vector<double>(nt));
  std::vector<std::complex<double>> scratch;
  for (size_t l = 0; l < L1; ++l)
    xev.eval_theta_many(flow.phi_levels[l], flow.values[l].data(), s[l].data(),
                        nt, scratch);
  double h = flow.phi_levels[1] - flow.phi_levels[0];
  std::vector<double> out(nt), col(L1);
  for (size_t j = 0; j < nt; ++j) {
    for (size_t l = 0; l < L1; ++l) col[l] = T.values[l][j] * s[l][j];
    out[j] = integrate_uniform(col, h);
  }
  return out;
}

namespace detail {

// (e^{2 pi i x} - 1) / (2 pi i x), the phi average of one torus mode along
// the linear flow; equals 1 at x = 0
inline std::complex<double> mode_average_factor(double x) {
  double z = kTwoPi * x;
  std::complex<double> iz(0.0, z);
  if (std::fabs(z) < 1e-6)
    return 1.0 + iz / 2.0 + iz * iz / 6.0 + iz * iz * iz / 24.0;
  return (std::exp(iz) - 1.0) / iz;
}

}  // namespace detail

// linearized-premise assembly: Pi'(theta) = int_0^1 X'(phi, theta+omega phi) dphi,
// evaluated per Fourier mode in closed form
inline std::vector<double> pi_prime_linearized(double omega,
                                               const Grid2& x_prime) {
  int np = x_prime.n_phi, nt = x_prime.n_theta;
  auto c = fft2(x_prime);
  std::vector<std::complex<double>> mu(nt, 0.0);
  for (int k0 = 0; k0 < np; ++k0) {
    int m = dft_freq(k0, np);
    int reps0 = (2 * std::abs(m) == np) ? 2 : 1;
    for (int k1 = 0; k1 < nt; ++k1) {
      int n = dft_freq(k1, nt);
      int reps1 = (2 * std::abs(n) == nt) ? 2 : 1;
      std::complex<double> coef = c[static_cast<size_t>(k0) * nt + k1];
      coef /= static_cast<double>(reps0 * reps1);
      for (int s0 = 0; s0 < reps0; ++s0) {
        int mm = s0 == 0 ? m : -m;
        for (int s1 = 0; s1 < reps1; ++s1) {
          int nn = s1 == 0 ? n : -n;
          mu[((nn % nt) + nt) % nt] +=
              coef * detail::mode_average_factor(mm + nn * omega);
        }
      }
    }
  }
  return ifft1(std::move(mu));
}

// P_t = id + t V sampled on the grid, then refit as a Fourier surface
inline FourierSurface deform_surface(const FourierSurface& s,
                                     const std::function<Vec3(const Vec3&)>& V,
                                     double t,
                                     const SurfaceOptions& opt = {}) {
  int np = s.n_phi(), nt = s.n_theta();
  VecGrid2 En(np, nt);
  double scale = 0;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      Vec3 p = s.E().at(i, j);
      Vec3 q = p + t * V(p);
      En.set(i, j, q);
      scale = std::max({scale, std::fabs(q.x), std::fabs(q.y), std::fabs(q.z)});
    }

  auto cx = fft2(En.x);
  auto cy = fft2(En.y);
  auto cz = fft2(En.z);
  std::vector<FourierMode> modes;
  double tol = 1e-14 * scale;
  for (int k0 = 0; k0 < np; ++k0)
    for (int k1 = 0; k1 < nt; ++k1) {
      int p0 = (np - k0) % np, p1 = (nt - k1) % nt;
      bool self = (p0 == k0 && p1 == k1);
      if (!self && std::make_pair(k0, k1) > std::make_pair(p0, p1)) continue;
      size_t id = static_cast<size_t>(k0) * nt + k1;
      Vec3 re{cx[id].real(), cy[id].real(), cz[id].real()};
      Vec3 im{cx[id].imag(), cy[id].imag(), cz[id].imag()};
      FourierMode md;
      md.m = dft_freq(k0, np);
      md.n = dft_freq(k1, nt);
      if (self) {
        md.c = re;
        md.s = Vec3{};
      } else {
        md.c = 2.0 * re;
        md.s = -2.0 * im;
      }
      if (std::max({std::fabs(md.c.x), std::fabs(md.c.y), std::fabs(md.c.z),
                    std::fabs(md.s.x), std::fabs(md.s.y), std::fabs(md.s.z)}) >
          tol)
        modes.push_back(md);
    }
  return build_surface(std::move(modes), np, nt, opt);
}

struct FdOptions {
  std::vector<double> t_list = {4e-3, 2e-3, 1e-3};
  NeumannOptions neumann;
  PoincareOptions poincare;
  int threads = 0;
};

struct FdReport {
  std::vector<double> t_list;
  std::vector<std::vector<double>> fd;  // central differences per t, on theta grid
  std::vector<double> richardson;       // extrapolation from the two finest t
  std::vector<double> sup_norms;        // of the FD curves
  std::vector<double> successive_diffs;
  double observed_order = 0;
};

// full-pipeline Poincare map of the deformed surface
inline std::vector<double> poincare_of_deformed(
    const FourierSurface& s, const std::function<Vec3(const Vec3&)>& V,
    double t, const NeumannOptions& nopt, const PoincareOptions& popt) {
  FourierSurface st = deform_surface(s, V, t);
  MetricData mt = compute_metric(st);
  HarmonicBoundaryField ht = compute_harmonic(st, mt, nopt);
  NormalizedField nft = normalize_toroidal(ht);
  return poincare_map(nft, popt).first.samples();
}

inline FdReport fd_pi_prime(const FourierSurface& s,
                            const std::function<Vec3(const Vec3&)>& V,
                            const FdOptions& opt = {}) {
  FdReport rep;
  rep.t_list = opt.t_list;
  size_t nt_cases = opt.t_list.size();

  std::vector<std::function<std::vector<double>()>> jobs;
  for (size_t q = 0; q < nt_cases; ++q)
    for (int sgn : {+1, -1}) {
      double tt = sgn * opt.t_list[q];
      jobs.emplace_back([&, tt] {
        return poincare_of_deformed(s, V, tt, opt.neumann, opt.poincare);
      });
    }
  auto res = run_jobs<std::vector<double>>(jobs, opt.threads);

  size_t n = res[0].size();
  rep.fd.assign(nt_cases, std::vector<double>(n));
  for (size_t q = 0; q < nt_cases; ++q) {
    const auto& fp = res[2 * q];
    const auto& fm = res[2 * q + 1];
    // lift matching: remove any integer winding offset seen at theta = 0
    double off = std::round(fp[0] - fm[0]);
    double sup = 0;
    for (size_t j = 0; j < n; ++j) {
      rep.fd[q][j] = (fp[j] - fm[j] - off) / (2.0 * opt.t_list[q]);
      sup = std::max(sup, std::fabs(rep.fd[q][j]));
    }
    rep.sup_norms.push_back(sup);
  }

  for (size_t q = 0; q + 1 < nt_cases; ++q) {
    double d = 0;
    for (size_t j = 0; j < n; ++j)
      d = std::max(d, std::fabs(rep.fd[q][j] - rep.fd[q + 1][j]));
    rep.successive_diffs.push_back(d);
  }
  if (rep.successive_diffs.size() >= 2) {
    double d1 = rep.successive_diffs[rep.successive_diffs.size() - 2];
    double d2 = rep.successive_diffs.back();
    double r = opt.t_list[nt_cases - 3] / opt.t_list[nt_cases - 2];
    if (d2 > 0) rep.observed_order = std::log(d1 / d2) / std::log(r);
  }
  if (nt_cases >= 2) {
    double r = opt.t_list[nt_cases - 2] / opt.t_list[nt_cases - 1];
    double r2 = r * r;
    rep.richardson.resize(n);
    for (size_t j = 0; j < n; ++j)
      rep.richardson[j] =
          (r2 * rep.fd[nt_cases - 1][j] - rep.fd[nt_cases - 2][j]) / (r2 - 1.0);
  }
  return rep;
}

}  // namespace torharm
