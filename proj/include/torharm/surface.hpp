#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "torharm/errors.hpp"
#include "torharm/grid.hpp"
#include "torharm/linalg.hpp"
#include "torharm/spectral.hpp"

namespace torharm {

// one real double-Fourier mode of the embedding:
// E += c cos(2 pi (m phi + n theta)) + s sin(2 pi (m phi + n theta))
struct FourierMode {
  int m = 0, n = 0;
  Vec3 c, s;
};

struct SurfaceOptions {
  double delta_axis_rel = 0.05;  // min axis clearance, relative to mean radius
  double immersion_tol = 1e-10;
};

class FourierSurface {
 public:
  FourierSurface() = default;

  const std::vector<FourierMode>& coeffs() const { return modes_; }
  int n_phi() const { return n_phi_; }
  int n_theta() const { return n_theta_; }
  double axis_clearance() const { return axis_clearance_; }

  const VecGrid2& E() const { return e_; }
  const VecGrid2& E_phi() const { return e_phi_; }
  const VecGrid2& E_theta() const { return e_theta_; }
  const VecGrid2& E_phiphi() const { return e_pp_; }
  const VecGrid2& E_phitheta() const { return e_pt_; }
  const VecGrid2& E_thetatheta() const { return e_tt_; }

  // direct mode-sum evaluation at arbitrary angles
  Vec3 eval(double phi, double theta) const {
    Vec3 p;
    for (const auto& md : modes_) {
      double a = kTwoPi * (md.m * phi + md.n * theta);
      p += md.c * std::cos(a) + md.s * std::sin(a);
    }
    return p;
  }

  friend FourierSurface build_surface(std::vector<FourierMode> coeffs,
                                      int n_phi, int n_theta,
                                      const SurfaceOptions& opt);

 private:
  std::vector<FourierMode> modes_;
  int n_phi_ = 0, n_theta_ = 0;
  double axis_clearance_ = 0;
  VecGrid2 e_, e_phi_, e_theta_, e_pp_, e_pt_, e_tt_;
};

namespace detail {

// fold duplicate modes into the half-spectrum canonical form
// (m > 0, or m == 0 and n >= 0)
inline std::vector<FourierMode> canonical_modes(std::vector<FourierMode> in) {
  std::vector<FourierMode> out;
  for (auto md : in) {
    if (md.m < 0 || (md.m == 0 && md.n < 0)) {
      md.m = -md.m;
      md.n = -md.n;
      md.s = md.s * -1.0;
    }
    if (md.m == 0 && md.n == 0) md.s = Vec3{};  // sin(0) carries nothing
    bool merged = false;
    for (auto& q : out)
      if (q.m == md.m && q.n == md.n) {
        q.c += md.c;
        q.s += md.s;
        merged = true;
        break;
      }
    if (!merged) out.push_back(md);
  }
  return out;
}

// sample one component grid and its angular derivatives through the spectrum
struct ModeSampler {
  int np, nt;
  std::vector<std::complex<double>> spec;  // base spectrum, DFT layout

  ModeSampler(const std::vector<FourierMode>& modes, int n_phi, int n_theta,
              double Vec3::*comp)
      : np(n_phi), nt(n_theta), spec(static_cast<size_t>(n_phi) * n_theta, 0.0) {
    for (const auto& md : modes) {
      if (2 * std::abs(md.m) > np || 2 * std::abs(md.n) > nt)
        throw ConfigError("surface mode (" + std::to_string(md.m) + "," +
                          std::to_string(md.n) + ") exceeds the grid band");
      std::complex<double> cp(0.5 * (md.c.*comp), -0.5 * (md.s.*comp));
      add(md.m, md.n, cp);
      add(-md.m, -md.n, std::conj(cp));
    }
  }

  void add(int m, int n, std::complex<double> v) {
    int i0 = ((m % np) + np) % np;
    int i1 = ((n % nt) + nt) % nt;
    spec[static_cast<size_t>(i0) * nt + i1] += v;
  }

  // d_phi^a d_theta^b sample grid
  Grid2 sample(int a, int b) const {
    auto c = spec;
    const std::complex<double> I(0, 1);
    for (int k0 = 0; k0 < np; ++k0)
      for (int k1 = 0; k1 < nt; ++k1) {
        double fm = dft_freq(k0, np), fn = dft_freq(k1, nt);
        auto& z = c[static_cast<size_t>(k0) * nt + k1];
        for (int r = 0; r < a; ++r) z *= kTwoPi * I * fm;
        for (int r = 0; r < b; ++r) z *= kTwoPi * I * fn;
      }
    return ifft2(std::move(c), np, nt);
  }
};

}  // namespace detail

inline FourierSurface build_surface(std::vector<FourierMode> coeffs, int n_phi,
                                    int n_theta,
                                    const SurfaceOptions& opt = {}) {
  if (n_phi < 16 || n_theta < 16 || n_phi % 2 || n_theta % 2)
    throw ConfigError("grid size must be even and at least 16x16");
  for (const auto& md : coeffs)
    if (!std::isfinite(md.c.x + md.c.y + md.c.z + md.s.x + md.s.y + md.s.z))
      throw ConfigError("non-finite surface coefficient");

  FourierSurface s;
  s.n_phi_ = n_phi;
  s.n_theta_ = n_theta;
  s.modes_ = detail::canonical_modes(std::move(coeffs));

  auto fill = [&] {
    VecGrid2* dst[6] = {&s.e_,    &s.e_phi_, &s.e_theta_,
                        &s.e_pp_, &s.e_pt_,  &s.e_tt_};
    const int ords[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    double Vec3::*comps[3] = {&Vec3::x, &Vec3::y, &Vec3::z};
    for (int ci = 0; ci < 3; ++ci) {
      detail::ModeSampler ms(s.modes_, n_phi, n_theta, comps[ci]);
      for (int q = 0; q < 6; ++q) {
        Grid2 g = ms.sample(ords[q][0], ords[q][1]);
        Grid2& target = ci == 0 ? dst[q]->x : (ci == 1 ? dst[q]->y : dst[q]->z);
        target = std::move(g);
      }
    }
  };

  s.e_ = VecGrid2(n_phi, n_theta);
  s.e_phi_ = VecGrid2(n_phi, n_theta);
  s.e_theta_ = VecGrid2(n_phi, n_theta);
  s.e_pp_ = VecGrid2(n_phi, n_theta);
  s.e_pt_ = VecGrid2(n_phi, n_theta);
  s.e_tt_ = VecGrid2(n_phi, n_theta);
  fill();

  // orientation: make (d_phi E x d_theta E) outward, i.e. signed volume > 0
  double vol = 0;
  for (int i = 0; i < n_phi; ++i)
    for (int j = 0; j < n_theta; ++j)
      vol += s.e_.at(i, j).dot(s.e_phi_.at(i, j).cross(s.e_theta_.at(i, j)));
  vol /= 3.0 * n_phi * n_theta;
  if (vol < 0) {
    for (auto& md : s.modes_) md.n = -md.n;
    s.modes_ = detail::canonical_modes(std::move(s.modes_));
    fill();
  }

  // immersion and axis clearance on the grid
  double min_cross = 1e300, mean_cross = 0, min_rho = 1e300, mean_rho = 0;
  for (int i = 0; i < n_phi; ++i)
    for (int j = 0; j < n_theta; ++j) {
      double cr = s.e_phi_.at(i, j).cross(s.e_theta_.at(i, j)).norm();
      min_cross = std::min(min_cross, cr);
      mean_cross += cr;
      Vec3 p = s.e_.at(i, j);
      double rho = std::hypot(p.x, p.y);
      min_rho = std::min(min_rho, rho);
      mean_rho += rho;
    }
  mean_cross /= static_cast<double>(n_phi) * n_theta;
  mean_rho /= static_cast<double>(n_phi) * n_theta;
  if (!(min_cross > opt.immersion_tol * mean_cross))
    throw ImmersionFailure("grid min |E_phi x E_theta| = " +
                           std::to_string(min_cross));
  s.axis_clearance_ = min_rho;
  if (!(min_rho > opt.delta_axis_rel * mean_rho))
    throw AxisIntersection("axis clearance " + std::to_string(min_rho) +
                           " below threshold");
  return s;
}

struct MetricData {
  Grid2 g_phiphi, g_phitheta, g_thetatheta, sqrt_g;
  VecGrid2 normal;
  Grid2 II_phiphi, II_phitheta, II_thetatheta;
};

inline MetricData compute_metric(const FourierSurface& s) {
  int np = s.n_phi(), nt = s.n_theta();
  MetricData m;
  m.g_phiphi = Grid2(np, nt);
  m.g_phitheta = Grid2(np, nt);
  m.g_thetatheta = Grid2(np, nt);
  m.sqrt_g = Grid2(np, nt);
  m.normal = VecGrid2(np, nt);
  m.II_phiphi = Grid2(np, nt);
  m.II_phitheta = Grid2(np, nt);
  m.II_thetatheta = Grid2(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      Vec3 ep = s.E_phi().at(i, j), et = s.E_theta().at(i, j);
      m.g_phiphi(i, j) = ep.dot(ep);
      m.g_phitheta(i, j) = ep.dot(et);
      m.g_thetatheta(i, j) = et.dot(et);
      Vec3 cr = ep.cross(et);
      double nrm = cr.norm();
      m.sqrt_g(i, j) = nrm;
      Vec3 n = cr / nrm;
      m.normal.set(i, j, n);
      m.II_phiphi(i, j) = s.E_phiphi().at(i, j).dot(n);
      m.II_phitheta(i, j) = s.E_phitheta().at(i, j).dot(n);
      m.II_thetatheta(i, j) = s.E_thetatheta().at(i, j).dot(n);
    }
  return m;
}

// contravariant components in the (phi, theta) coordinate frame
struct TangentField {
  Grid2 v_phi, v_theta;

  TangentField() = default;
  TangentField(int np, int nt) : v_phi(np, nt), v_theta(np, nt) {}
};

// ambient deformation V split into normal part f = V.n and tangential V_Gamma
struct DeformationField {
  Grid2 f, vg_phi, vg_theta;
  std::function<Vec3(const Vec3&)> ambient_eval;  // kept for FD deformation
};

// n x u in contravariant components (positively oriented frame)
inline TangentField perp(const TangentField& u, const MetricData& m) {
  int np = u.v_phi.n_phi, nt = u.v_phi.n_theta;
  TangentField r(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      double up = u.v_phi(i, j), ut = u.v_theta(i, j);
      double sg = m.sqrt_g(i, j);
      r.v_phi(i, j) = -(m.g_phitheta(i, j) * up + m.g_thetatheta(i, j) * ut) / sg;
      r.v_theta(i, j) = (m.g_phiphi(i, j) * up + m.g_phitheta(i, j) * ut) / sg;
    }
  return r;
}

inline Grid2 II_bilinear(const MetricData& m, const TangentField& u,
                         const TangentField& v) {
  int np = u.v_phi.n_phi, nt = u.v_phi.n_theta;
  Grid2 r(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      r(i, j) = m.II_phiphi(i, j) * u.v_phi(i, j) * v.v_phi(i, j) +
                m.II_phitheta(i, j) * (u.v_phi(i, j) * v.v_theta(i, j) +
                                       u.v_theta(i, j) * v.v_phi(i, j)) +
                m.II_thetatheta(i, j) * u.v_theta(i, j) * v.v_theta(i, j);
  return r;
}

// metric inner product g(u, v) pointwise
inline Grid2 g_inner(const MetricData& m, const TangentField& u,
                     const TangentField& v) {
  int np = u.v_phi.n_phi, nt = u.v_phi.n_theta;
  Grid2 r(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      r(i, j) = m.g_phiphi(i, j) * u.v_phi(i, j) * v.v_phi(i, j) +
                m.g_phitheta(i, j) * (u.v_phi(i, j) * v.v_theta(i, j) +
                                      u.v_theta(i, j) * v.v_phi(i, j)) +
                m.g_thetatheta(i, j) * u.v_theta(i, j) * v.v_theta(i, j);
  return r;
}

// contravariant components of the tangential projection of an ambient grid
inline TangentField tangent_from_ambient(const FourierSurface& s,
                                         const MetricData& m,
                                         const VecGrid2& w) {
  int np = s.n_phi(), nt = s.n_theta();
  TangentField r(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      Vec3 v = w.at(i, j);
      solve2x2(m.g_phiphi(i, j), m.g_phitheta(i, j), m.g_thetatheta(i, j),
               v.dot(s.E_phi().at(i, j)), v.dot(s.E_theta().at(i, j)),
               r.v_phi(i, j), r.v_theta(i, j));
    }
  return r;
}

inline DeformationField decompose_deformation(
    const std::function<Vec3(const Vec3&)>& ambient, const FourierSurface& s,
    const MetricData& m) {
  int np = s.n_phi(), nt = s.n_theta();
  VecGrid2 w(np, nt);
  DeformationField d;
  d.f = Grid2(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      Vec3 v = ambient(s.E().at(i, j));
      w.set(i, j, v);
      d.f(i, j) = v.dot(m.normal.at(i, j));
    }
  TangentField t = tangent_from_ambient(s, m, w);
  d.vg_phi = std::move(t.v_phi);
  d.vg_theta = std::move(t.v_theta);
  d.ambient_eval = ambient;
  return d;
}

inline Grid2 surface_divergence(const MetricData& m, const TangentField& u) {
  Grid2 a = hadamard(m.sqrt_g, u.v_phi);
  Grid2 b = hadamard(m.sqrt_g, u.v_theta);
  Grid2 r = deriv_phi(a) + deriv_theta(b);
  for (size_t k = 0; k < r.v.size(); ++k) r.v[k] /= m.sqrt_g.v[k];
  return r;
}

}  // namespace torharm
