#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "torharm/errors.hpp"
#include "torharm/neumann.hpp"
#include "torharm/spectral.hpp"
#include "torharm/surface.hpp"
#include "torharm/wire.hpp"

namespace torharm {

// boundary restriction of the unit-circulation harmonic field,
// B = B_wire + grad(chi) with chi the interior Neumann correction
struct HarmonicBoundaryField {
  TangentField B;
  NeumannSolution chi_correction;
  double b_phi_min = 0;
  int min_i = 0, min_j = 0;
  double max_circulation_drift = 0;
};

struct AdmissibilityReport {
  double b_phi_min = 0;
  bool admissible = false;
  double phi = 0, theta = 0;  // location of the minimum
};

struct NormalizedField {
  Grid2 X_theta;
  Grid2 dX_theta_dtheta;  // cached for the transition factor
  Grid2 b_phi;            // chi of the linearized premise when it holds
};

inline HarmonicBoundaryField compute_harmonic(const FourierSurface& s,
                                              const MetricData& m,
                                              const NeumannOperator& op) {
  Grid2 datum = -1.0 * wire_normal_trace(s, m);
  HarmonicBoundaryField h;
  h.chi_correction = solve_or_zero(op, datum);

  int np = s.n_phi(), nt = s.n_theta();
  VecGrid2 w(np, nt);
  double delta = 0.5 * s.axis_clearance();
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      w.set(i, j, eval_wire(s.E().at(i, j), delta));
  TangentField proj = tangent_from_ambient(s, m, w);
  h.B = TangentField(np, nt);
  for (size_t k = 0; k < h.B.v_phi.size(); ++k) {
    h.B.v_phi.v[k] =
        proj.v_phi.v[k] + h.chi_correction.grad_tangential.v_phi.v[k];
    h.B.v_theta.v[k] =
        proj.v_theta.v[k] + h.chi_correction.grad_tangential.v_theta.v[k];
  }

  // unit toroidal circulation, loop by loop
  double drift = 0;
  for (int j = 0; j < nt; ++j) {
    double c = 0;
    for (int i = 0; i < np; ++i)
      c += m.g_phiphi(i, j) * h.B.v_phi(i, j) +
           m.g_phitheta(i, j) * h.B.v_theta(i, j);
    c /= np;
    drift = std::max(drift, std::fabs(c - 1.0));
  }
  h.max_circulation_drift = drift;
  if (drift > 1e-6)
    throw CirculationDrift("toroidal circulation off by " +
                           std::to_string(drift));

  h.b_phi_min = 1e300;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      if (h.B.v_phi(i, j) < h.b_phi_min) {
        h.b_phi_min = h.B.v_phi(i, j);
        h.min_i = i;
        h.min_j = j;
      }
  return h;
}

inline HarmonicBoundaryField compute_harmonic(const FourierSurface& s,
                                              const MetricData& m,
                                              const NeumannOptions& opt = {}) {
  NeumannOperator op(s, m, opt);
  return compute_harmonic(s, m, op);
}

inline AdmissibilityReport check_admissible(const HarmonicBoundaryField& h,
                                            const FourierSurface& s) {
  AdmissibilityReport r;
  r.b_phi_min = h.b_phi_min;
  r.admissible = h.b_phi_min > 0;
  r.phi = static_cast<double>(h.min_i) / s.n_phi();
  r.theta = static_cast<double>(h.min_j) / s.n_theta();
  return r;
}

inline NormalizedField normalize_toroidal(const HarmonicBoundaryField& h) {
  if (!(h.b_phi_min > 0))
    throw NotTransverse("B^phi attains " + std::to_string(h.b_phi_min));
  NormalizedField n;
  int np = h.B.v_phi.n_phi, nt = h.B.v_phi.n_theta;
  n.X_theta = Grid2(np, nt);
  for (size_t k = 0; k < n.X_theta.size(); ++k)
    n.X_theta.v[k] = h.B.v_theta.v[k] / h.B.v_phi.v[k];
  n.dX_theta_dtheta = deriv_theta(n.X_theta);
  n.b_phi = h.B.v_phi;
  return n;
}

struct LinearizedPremise {
  double omega = 0;
  Grid2 chi;
};

// detects B = chi (d_phi + omega d_theta), i.e. X^theta constant
inline std::optional<LinearizedPremise> detect_linearized(
    const NormalizedField& n, double tol) {
  double omega = grid_mean(n.X_theta);
  double dev = 0;
  for (double x : n.X_theta.v) dev = std::max(dev, std::fabs(x - omega));
  if (dev > tol) return std::nullopt;
  return LinearizedPremise{omega, n.b_phi};
}

}  // namespace torharm
