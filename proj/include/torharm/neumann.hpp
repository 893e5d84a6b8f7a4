#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "torharm/errors.hpp"
#include "torharm/grid.hpp"
#include "torharm/linalg.hpp"
#include "torharm/parallel.hpp"
#include "torharm/quadrature.hpp"
#include "torharm/spectral.hpp"
#include "torharm/surface.hpp"

namespace torharm {

struct NeumannOptions {
  double compat_tol = 1e-10;
  double cond_bound = 1e8;
  double residual_tol = 1e-10;
  int fine_min = 256;              // fine quadrature grid, per dimension
  double patch_outer = 0.18;       // singular patch radius in parameter space
  double patch_inner_frac = 0.4;   // window flat radius / patch_outer
  int n_rho = 0;                   // radial Gauss-Legendre order in the patch,
                                   // 0 = scale with the grid
  int n_gamma = 64;                // angular trapezoid points in the patch
  int threads = 0;
};

// exact band-limited geometry resampled to the fine quadrature grid
struct FineGeometry {
  int mp = 0, mt = 0;
  VecGrid2 E;
  Grid2 sqrtg;
  double max_spacing = 0;
};

inline std::shared_ptr<const FineGeometry> build_fine_geometry(
    const FourierSurface& s, const MetricData& m, int fine_min) {
  auto fg = std::make_shared<FineGeometry>();
  int np = s.n_phi(), nt = s.n_theta();
  int mup = (std::max(fine_min, np) + np - 1) / np;
  int mut = (std::max(fine_min, nt) + nt - 1) / nt;
  fg->mp = mup * np;
  fg->mt = mut * nt;
  fg->E.x = upsample(s.E().x, fg->mp, fg->mt);
  fg->E.y = upsample(s.E().y, fg->mp, fg->mt);
  fg->E.z = upsample(s.E().z, fg->mp, fg->mt);
  VecGrid2 ep, et;
  ep.x = upsample(s.E_phi().x, fg->mp, fg->mt);
  ep.y = upsample(s.E_phi().y, fg->mp, fg->mt);
  ep.z = upsample(s.E_phi().z, fg->mp, fg->mt);
  et.x = upsample(s.E_theta().x, fg->mp, fg->mt);
  et.y = upsample(s.E_theta().y, fg->mp, fg->mt);
  et.z = upsample(s.E_theta().z, fg->mp, fg->mt);
  fg->sqrtg = Grid2(fg->mp, fg->mt);
  for (int i = 0; i < fg->mp; ++i)
    for (int j = 0; j < fg->mt; ++j)
      fg->sqrtg(i, j) = ep.at(i, j).cross(et.at(i, j)).norm();
  double sp = 0;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      sp = std::max(sp, std::max(std::sqrt(m.g_phiphi(i, j)) / fg->mp,
                                 std::sqrt(m.g_thetatheta(i, j)) / fg->mt));
  fg->max_spacing = sp;
  return fg;
}

struct NeumannProblem {
  const FourierSurface* surface = nullptr;
  const MetricData* metric = nullptr;
  Grid2 datum;
};

struct NeumannSolution {
  Grid2 density;              // single-layer density sigma
  Grid2 trace;                // u on the boundary, zero weighted mean
  TangentField grad_tangential;
  Grid2 normal_flux;          // interior flux of the layer field, = datum up
                              // to solver accuracy
  Grid2 datum;
  double raw_trace_mean = 0;  // subtracted normalization constant
  std::shared_ptr<const FineGeometry> fine;
  std::vector<double> sigma_fine;
};

namespace detail {

// C-infinity window: 1 for d <= r0, 0 for d >= r1
class BumpWindow {
 public:
  BumpWindow(double r0, double r1) : r0_(r0), r1_(r1) {}

  double near_weight(double d) const {
    if (d <= r0_) return 1.0;
    if (d >= r1_) return 0.0;
    double t = (r1_ - d) / (r1_ - r0_);
    double a = ramp(t), b = ramp(1.0 - t);
    return a / (a + b);
  }
  double r0() const { return r0_; }
  double r1() const { return r1_; }

 private:
  static double ramp(double t) { return t <= 0 ? 0.0 : std::exp(-1.0 / t); }
  double r0_, r1_;
};

struct PolarNode {
  int base_phi, base_theta;      // leftmost stencil offsets, fine-grid units
  double w_phi[8], w_theta[8];   // order-8 Lagrange weights
  double coeff;                  // window * rho * W_rho * W_gamma
};

inline void lagrange8(double u, int& base, double* w) {
  double fl = std::floor(u);
  base = static_cast<int>(fl) - 3;
  double frac = u - fl;
  for (int a = 0; a < 8; ++a) {
    double num = 1, den = 1;
    for (int b = 0; b < 8; ++b) {
      if (b == a) continue;
      num *= frac + 3.0 - b;
      den *= static_cast<double>(a - b);
    }
    w[a] = num / den;
  }
}

}  // namespace detail

// dense Nystrom discretization of the interior Neumann problem via a
// single-layer ansatz: ((1/2) I + K') sigma = g, nullspace removed by a
// mean-zero constraint row. The weakly singular kernels are split by a
// radial window; the smooth remainder integrates by trapezoid on a fine
// grid and the windowed part by a polar patch rule, both folded into each
// matrix row through FFT-based interpolation adjoints.
class NeumannOperator {
 public:
  NeumannOperator(const FourierSurface& s, const MetricData& m,
                  NeumannOptions opt = {})
      : s_(&s), m_(&m), opt_(opt), np_(s.n_phi()), nt_(s.n_theta()) {
    n_ = np_ * nt_;
    fine_ = build_fine_geometry(s, m, opt.fine_min);
    weights_.resize(n_);
    for (int i = 0; i < np_; ++i)
      for (int j = 0; j < nt_; ++j)
        weights_[idx(i, j)] = m.sqrt_g(i, j) / static_cast<double>(n_);
    area_ = 0;
    for (double w : weights_) area_ += w;
    assemble();
  }

  NeumannSolution solve(const Grid2& datum) const {
    check_compatible(datum);
    int n = n_;
    std::vector<double> rhs(n + 1, 0.0);
    for (int k = 0; k < n; ++k) rhs[k] = datum.v[k];
    std::vector<double> x = lu_->solve(std::move(rhs));

    NeumannSolution sol;
    sol.datum = datum;
    sol.density = Grid2(np_, nt_);
    for (int k = 0; k < n; ++k) sol.density.v[k] = x[k];

    // residual through the stored flux matrix rows
    sol.normal_flux = Grid2(np_, nt_);
    double scale = std::max({datum.max_abs(), sol.density.max_abs(), 1.0});
    double resid = 0;
    for (int i = 0; i < n; ++i) {
      const double* row = &flux_rows_[static_cast<size_t>(i) * (n + 1)];
      double acc = 0;
      for (int j = 0; j < n; ++j) acc += row[j] * x[j];
      sol.normal_flux.v[i] = acc;
      resid = std::max(resid, std::fabs(acc + x[n] - datum.v[i]));
    }
    if (resid > opt_.residual_tol * scale)
      throw IllConditioned("discrete Neumann residual " + std::to_string(resid));

    Grid2 raw(np_, nt_);
    for (int i = 0; i < n; ++i) {
      const double* row = &slp_rows_[static_cast<size_t>(i) * n];
      double acc = 0;
      for (int j = 0; j < n; ++j) acc += row[j] * x[j];
      raw.v[i] = acc;
    }
    double mean = 0;
    for (int k = 0; k < n; ++k) mean += weights_[k] * raw.v[k];
    mean /= area_;
    sol.raw_trace_mean = mean;
    sol.trace = raw;
    for (double& t : sol.trace.v) t -= mean;

    Grid2 up = deriv_phi(sol.trace), ut = deriv_theta(sol.trace);
    sol.grad_tangential = TangentField(np_, nt_);
    for (int k = 0; k < n; ++k) {
      double detg = m_->sqrt_g.v[k] * m_->sqrt_g.v[k];
      sol.grad_tangential.v_phi.v[k] =
          (m_->g_thetatheta.v[k] * up.v[k] - m_->g_phitheta.v[k] * ut.v[k]) /
          detg;
      sol.grad_tangential.v_theta.v[k] =
          (-m_->g_phitheta.v[k] * up.v[k] + m_->g_phiphi.v[k] * ut.v[k]) / detg;
    }

    sol.fine = fine_;
    Grid2 sf = upsample(sol.density, fine_->mp, fine_->mt);
    sol.sigma_fine = std::move(sf.v);
    return sol;
  }

  // action of (1/2)I + K' on a density, without the bordered column
  Grid2 apply_flux(const Grid2& sigma) const {
    Grid2 out(np_, nt_);
    for (int i = 0; i < n_; ++i) {
      const double* row = &flux_rows_[static_cast<size_t>(i) * (n_ + 1)];
      double acc = 0;
      for (int j = 0; j < n_; ++j) acc += row[j] * sigma.v[j];
      out.v[i] = acc;
    }
    return out;
  }

  // boundary trace of the single-layer field of a density
  Grid2 apply_trace(const Grid2& sigma) const {
    Grid2 out(np_, nt_);
    for (int i = 0; i < n_; ++i) {
      const double* row = &slp_rows_[static_cast<size_t>(i) * n_];
      double acc = 0;
      for (int j = 0; j < n_; ++j) acc += row[j] * sigma.v[j];
      out.v[i] = acc;
    }
    return out;
  }

  double condition() const { return lu_->condition(); }
  const std::vector<double>& area_weights() const { return weights_; }
  double area() const { return area_; }
  std::shared_ptr<const FineGeometry> fine_geometry() const { return fine_; }

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * nt_ + j; }

  void check_compatible(const Grid2& g) const {
    if (g.n_phi != np_ || g.n_theta != nt_)
      throw ConfigError("datum grid size mismatch");
    double flux = 0;
    for (int k = 0; k < n_; ++k) flux += weights_[k] * g.v[k];
    if (std::fabs(flux) > opt_.compat_tol * g.max_abs() * area_ + 1e-300)
      throw IncompatibleDatum("datum flux " + std::to_string(flux) +
                              " violates compatibility");
  }

  void assemble() {
    const int mp = fine_->mp, mt = fine_->mt;
    const size_t mtot = static_cast<size_t>(mp) * mt;
    const int n = n_;
    detail::BumpWindow wnd(opt_.patch_inner_frac * opt_.patch_outer,
                           opt_.patch_outer);

    // parameter offsets of fine nodes relative to a target, by index offset
    std::vector<double> dphi(mp), dtheta(mt);
    for (int k = 0; k < mp; ++k) dphi[k] = wrap_half(double(k) / mp);
    for (int k = 0; k < mt; ++k) dtheta[k] = wrap_half(double(k) / mt);

    // polar patch rule with per-node interpolation stencils; the windowed
    // radial integrand is smooth but not analytic, so the Gauss order has to
    // grow with the target resolution to keep the patch below the band error
    const int n_rho =
        opt_.n_rho > 0 ? opt_.n_rho : std::max(24, 3 * std::max(np_, nt_) / 2);
    std::vector<detail::PolarNode> nodes;
    {
      std::vector<double> rx, rw;
      gauss_legendre_ab(n_rho, 0.0, wnd.r1(), rx, rw);
      for (int q = 0; q < n_rho; ++q) {
        double w_near = wnd.near_weight(rx[q]);
        if (w_near < 1e-16) continue;
        for (int r = 0; r < opt_.n_gamma; ++r) {
          double gam = kTwoPi * r / opt_.n_gamma;
          detail::PolarNode nd;
          detail::lagrange8(rx[q] * std::cos(gam) * mp, nd.base_phi, nd.w_phi);
          detail::lagrange8(rx[q] * std::sin(gam) * mt, nd.base_theta,
                            nd.w_theta);
          nd.coeff = w_near * rx[q] * rw[q] * (kTwoPi / opt_.n_gamma);
          nodes.push_back(nd);
        }
      }
    }

    flux_rows_.assign(static_cast<size_t>(n) * (n + 1), 0.0);
    slp_rows_.assign(static_cast<size_t>(n) * n, 0.0);

    const double inv_mtot = 1.0 / static_cast<double>(mtot);
    const double inv_ntot = 1.0 / static_cast<double>(n);
    const double r0 = wnd.r0(), r1 = wnd.r1();
    const double r0sq = r0 * r0, r1sq = r1 * r1;
    const int mup = mp / np_, mut = mt / nt_;

    parallel_for(
        static_cast<size_t>(n),
        [&](size_t row) {
          int i = static_cast<int>(row) / nt_, j = static_cast<int>(row) % nt_;
          const int fi = i * mup, fj = j * mut;
          const Vec3 x = s_->E().at(i, j);
          const Vec3 nx = m_->normal.at(i, j);

          thread_local std::vector<std::complex<double>> F;
          F.assign(mtot, 0.0);

          // smooth remainder on the fine grid
          for (int a = 0; a < mp; ++a) {
            int ka = a - fi;
            if (ka < 0) ka += mp;
            double dp2 = dphi[ka] * dphi[ka];
            const size_t arow = static_cast<size_t>(a) * mt;
            for (int b = 0; b < mt; ++b) {
              int kb = b - fj;
              if (kb < 0) kb += mt;
              double d2 = dp2 + dtheta[kb] * dtheta[kb];
              if (d2 <= r0sq) continue;  // window kills it
              double far = 1.0;
              if (d2 < r1sq) far = 1.0 - wnd.near_weight(std::sqrt(d2));
              Vec3 rv = fine_->E.at(a, b) - x;
              double rr = rv.norm();
              double sg = fine_->sqrtg.v[arow + b];
              double ks = far * sg / (4.0 * M_PI * rr);
              double kk = far * sg * rv.dot(nx) / (4.0 * M_PI * rr * rr * rr);
              F[arow + b] = std::complex<double>(ks, kk);
            }
          }
          for (auto& z : F) z *= inv_mtot;

          // windowed singular part: polar rule splatted through the
          // order-8 interpolation stencils
          for (const auto& nd : nodes) {
            int ia[8], ib[8];
            for (int a = 0; a < 8; ++a) {
              int t = fi + nd.base_phi + a;
              t %= mp;
              if (t < 0) t += mp;
              ia[a] = t;
            }
            for (int b = 0; b < 8; ++b) {
              int t = fj + nd.base_theta + b;
              t %= mt;
              if (t < 0) t += mt;
              ib[b] = t;
            }
            Vec3 y{};
            double sg = 0;
            for (int a = 0; a < 8; ++a) {
              const size_t ra = static_cast<size_t>(ia[a]) * mt;
              double wx = 0, wy = 0, wz = 0, wg = 0;
              for (int b = 0; b < 8; ++b) {
                double w = nd.w_theta[b];
                size_t id = ra + ib[b];
                wx += w * fine_->E.x.v[id];
                wy += w * fine_->E.y.v[id];
                wz += w * fine_->E.z.v[id];
                wg += w * fine_->sqrtg.v[id];
              }
              y += nd.w_phi[a] * Vec3{wx, wy, wz};
              sg += nd.w_phi[a] * wg;
            }
            Vec3 rv = y - x;
            double rr = rv.norm();
            if (rr < 1e-14) continue;
            double cs = nd.coeff * sg / (4.0 * M_PI * rr);
            double ck =
                nd.coeff * sg * rv.dot(nx) / (4.0 * M_PI * rr * rr * rr);
            std::complex<double> cv(cs, ck);
            for (int a = 0; a < 8; ++a) {
              const size_t ra = static_cast<size_t>(ia[a]) * mt;
              std::complex<double> ca = cv * nd.w_phi[a];
              for (int b = 0; b < 8; ++b) F[ra + ib[b]] += ca * nd.w_theta[b];
            }
          }

          dft2(F.data(), mp, mt, FFTW_FORWARD);

          // restrict to the coarse band (adjoint of trig interpolation) and
          // unpack the two kernels from the packed transform
          thread_local std::vector<std::complex<double>> CS, CK;
          CS.assign(static_cast<size_t>(n), 0.0);
          CK.assign(static_cast<size_t>(n), 0.0);
          const std::complex<double> I(0, 1);
          for (int k0 = 0; k0 < np_; ++k0) {
            int f0 = dft_freq(k0, np_);
            int reps0 = (2 * std::abs(f0) == np_) ? 2 : 1;
            for (int k1 = 0; k1 < nt_; ++k1) {
              int f1 = dft_freq(k1, nt_);
              int reps1 = (2 * std::abs(f1) == nt_) ? 2 : 1;
              std::complex<double> gs(0.0), gk(0.0);
              double wsplit = 1.0 / (reps0 * reps1);
              for (int s0 = 0; s0 < reps0; ++s0) {
                int ff0 = s0 == 0 ? f0 : -f0;
                for (int s1 = 0; s1 < reps1; ++s1) {
                  int ff1 = s1 == 0 ? f1 : -f1;
                  size_t kp = static_cast<size_t>((ff0 + mp) % mp) * mt +
                              (ff1 + mt) % mt;
                  size_t km = static_cast<size_t>((mp - (ff0 + mp) % mp) % mp) *
                                  mt +
                              (mt - (ff1 + mt) % mt) % mt;
                  std::complex<double> v = F[kp], vm = std::conj(F[km]);
                  gs += wsplit * std::conj(0.5 * (v + vm));
                  gk += wsplit * std::conj((v - vm) / (2.0 * I));
                }
              }
              CS[idx(k0, k1)] = gs;
              CK[idx(k0, k1)] = gk;
            }
          }
          dft2(CS.data(), np_, nt_, FFTW_FORWARD);
          dft2(CK.data(), np_, nt_, FFTW_FORWARD);

          double* frow = &flux_rows_[row * (n + 1)];
          double* srow = &slp_rows_[row * n];
          for (int k = 0; k < n; ++k) {
            srow[k] = CS[k].real() * inv_ntot;
            frow[k] = CK[k].real() * inv_ntot;
          }
          frow[row] += 0.5;
          frow[n] = 1.0;  // bordered column spanning the cokernel
        },
        opt_.threads);

    // mean-zero constraint row closes the bordered system
    std::vector<double> bordered(static_cast<size_t>(n + 1) * (n + 1), 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k <= n; ++k)
        bordered[static_cast<size_t>(i) * (n + 1) + k] =
            flux_rows_[static_cast<size_t>(i) * (n + 1) + k];
    for (int k = 0; k < n; ++k)
      bordered[static_cast<size_t>(n) * (n + 1) + k] = weights_[k];
    lu_ = std::make_unique<DenseLu>(std::move(bordered), n + 1,
                                    opt_.cond_bound);
  }

  const FourierSurface* s_;
  const MetricData* m_;
  NeumannOptions opt_;
  int np_, nt_, n_ = 0;
  double area_ = 0;
  std::vector<double> weights_;
  std::shared_ptr<const FineGeometry> fine_;
  std::vector<double> flux_rows_;  // rows of (1/2)I + K' plus bordered column
  std::vector<double> slp_rows_;   // rows of the single-layer trace matrix
  std::unique_ptr<DenseLu> lu_;
};

inline NeumannSolution solve_neumann(const NeumannProblem& p,
                                     const NeumannOptions& opt = {}) {
  NeumannOperator op(*p.surface, *p.metric, opt);
  return op.solve(p.datum);
}

// solve(), except a datum at roundoff level is taken as identically zero.
// Symmetric configurations produce such data, and the relative compatibility
// gate inside solve() cannot classify pure cancellation noise.
inline NeumannSolution solve_or_zero(const NeumannOperator& op,
                                     const Grid2& datum,
                                     double zero_floor = 1e-10) {
  if (datum.max_abs() > zero_floor) return op.solve(datum);
  int np = datum.n_phi, nt = datum.n_theta;
  NeumannSolution sol;
  sol.datum = datum;
  sol.density = Grid2(np, nt);
  sol.trace = Grid2(np, nt);
  sol.normal_flux = Grid2(np, nt);
  sol.grad_tangential = TangentField(np, nt);
  sol.fine = op.fine_geometry();
  sol.sigma_fine.assign(sol.fine->E.x.v.size(), 0.0);
  return sol;
}

// single-layer potential at a strictly interior point
inline double evaluate_interior(const NeumannSolution& sol, const Vec3& p) {
  const FineGeometry& fg = *sol.fine;
  double dmin = 1e300;
  for (size_t k = 0; k < fg.E.x.size(); ++k) {
    Vec3 d{fg.E.x.v[k] - p.x, fg.E.y.v[k] - p.y, fg.E.z.v[k] - p.z};
    dmin = std::min(dmin, d.norm());
  }
  if (dmin < 2.0 * fg.max_spacing)
    throw TooCloseToBoundary("probe at distance " + std::to_string(dmin) +
                             ", need " + std::to_string(2.0 * fg.max_spacing));
  double acc = 0;
  for (size_t k = 0; k < fg.E.x.size(); ++k) {
    Vec3 d{p.x - fg.E.x.v[k], p.y - fg.E.y.v[k], p.z - fg.E.z.v[k]};
    acc += sol.sigma_fine[k] * fg.sqrtg.v[k] / (4.0 * M_PI * d.norm());
  }
  return acc / static_cast<double>(fg.E.x.size());
}

}  // namespace torharm
