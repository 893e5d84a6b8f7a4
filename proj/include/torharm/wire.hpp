#pragma once

#include <cmath>
#include <string>

#include "torharm/errors.hpp"
#include "torharm/grid.hpp"
#include "torharm/spectral.hpp"
#include "torharm/surface.hpp"

namespace torharm {

// closed-form curl- and divergence-free field with unit circulation around
// the z-axis: B_w = (1/2pi) (-y, x, 0) / (x^2 + y^2)
inline Vec3 eval_wire(const Vec3& p, double delta_axis = 1e-8) {
  double rho2 = p.x * p.x + p.y * p.y;
  if (!(std::sqrt(rho2) >= delta_axis))
    throw AxisProximity("wire field evaluated at cylindrical radius " +
                        std::to_string(std::sqrt(rho2)));
  double s = 1.0 / (kTwoPi * rho2);
  return {-p.y * s, p.x * s, 0.0};
}

// B_w . n on the surface grid; identically zero on axisymmetric tori.
// The continuous trace has zero total flux by the divergence theorem, so the
// discrete residue is pure quadrature noise; it is projected out here to keep
// coarse grids inside the solver's compatibility gate.
inline Grid2 wire_normal_trace(const FourierSurface& s, const MetricData& m) {
  int np = s.n_phi(), nt = s.n_theta();
  Grid2 g(np, nt);
  double delta = 0.5 * s.axis_clearance();
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      g(i, j) = eval_wire(s.E().at(i, j), delta).dot(m.normal.at(i, j));
  double flux = 0, area = 0;
  for (size_t k = 0; k < g.v.size(); ++k) {
    flux += m.sqrt_g.v[k] * g.v[k];
    area += m.sqrt_g.v[k];
  }
  double shift = flux / area;
  for (double& x : g.v) x -= shift;
  return g;
}

}  // namespace torharm
