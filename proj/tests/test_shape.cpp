#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <torharm/axisym.hpp>
#include <torharm/io.hpp>
#include <torharm/poincare.hpp>
#include <torharm/shape.hpp>
#include <torharm/surface.hpp>

using namespace torharm;

namespace {

NormalizedField rigid_field(int np, int nt, double omega) {
  NormalizedField nf;
  nf.X_theta = Grid2(np, nt);
  for (double& v : nf.X_theta.v) v = omega;
  nf.dX_theta_dtheta = deriv_theta(nf.X_theta);
  nf.b_phi = Grid2(np, nt);
  for (double& v : nf.b_phi.v) v = 1.0;
  return nf;
}

NeumannSolution zero_solution(int np, int nt) {
  NeumannSolution u;
  u.density = Grid2(np, nt);
  u.trace = Grid2(np, nt);
  u.normal_flux = Grid2(np, nt);
  u.datum = Grid2(np, nt);
  u.grad_tangential = TangentField(np, nt);
  return u;
}

}  // namespace

TEST_CASE("derivative datum of a vertical shift vanishes on axisymmetry") {
  AxisymTorus t(2.0, 1.0);
  FourierSurface s = t.make_surface(32, 32);
  auto [m, h] = exact_fields(t, 32, 32);
  DeformationField V =
      decompose_deformation([](const Vec3&) { return Vec3{0, 0, 1}; }, s, m);
  Grid2 g = uV_datum(m, h.B, V);
  CHECK(g.max_abs() < 1e-12);
}

TEST_CASE("derivative datum always has zero total flux") {
  FourierSurface s = perturbed_torus(AxisymTorus(2.0, 1.0), 0.1, 2, 1, 32, 32);
  MetricData m = compute_metric(s);
  HarmonicBoundaryField h;
  h.B = TangentField(32, 32);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      h.B.v_phi(i, j) = 0.03 + 0.01 * std::cos(kTwoPi * (i + 2.0 * j) / 32.0);
      h.B.v_theta(i, j) = 0.01 * std::sin(kTwoPi * j / 32.0);
    }
  DeformationField V = decompose_deformation(random_ambient_deformation(11), s, m);
  Grid2 g = uV_datum(m, h.B, V);
  double total = 0, scale = 0;
  for (size_t k = 0; k < g.v.size(); ++k) {
    total += m.sqrt_g.v[k] * g.v[k];
    scale += m.sqrt_g.v[k] * std::fabs(g.v[k]);
  }
  CHECK(std::fabs(total) < 1e-12 * scale);
}

TEST_CASE("derivative field assembles its three boundary terms") {
  int np = 16, nt = 16;
  MetricData m;
  m.g_phiphi = Grid2(np, nt);
  m.g_phitheta = Grid2(np, nt);
  m.g_thetatheta = Grid2(np, nt);
  m.sqrt_g = Grid2(np, nt);
  m.II_phiphi = Grid2(np, nt);
  m.II_phitheta = Grid2(np, nt);
  m.II_thetatheta = Grid2(np, nt);
  m.normal = VecGrid2(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      m.g_phiphi(i, j) = 1.0;
      m.g_thetatheta(i, j) = 1.0;
      m.sqrt_g(i, j) = 1.0;
      m.II_phitheta(i, j) = 1.0;
    }

  HarmonicBoundaryField h;
  h.B = TangentField(np, nt);
  for (double& v : h.B.v_phi.v) v = 1.0;
  h.b_phi_min = 1.0;

  DeformationField V;
  V.f = Grid2(np, nt);
  V.vg_phi = Grid2(np, nt);
  V.vg_theta = Grid2(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      V.f(i, j) = 0.3;
      V.vg_theta(i, j) = std::sin(kTwoPi * i / np);
    }

  NeumannSolution uV = zero_solution(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      uV.grad_tangential.v_phi(i, j) = 0.2;
      uV.grad_tangential.v_theta(i, j) = std::cos(kTwoPi * j / nt);
    }

  Grid2 xp = x_prime_theta(m, h, V, uV);
  double err = 0;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      double want = 2.0 * 0.3 - kTwoPi * std::cos(kTwoPi * i / np) +
                    std::cos(kTwoPi * j / nt);
      err = std::max(err, std::fabs(xp(i, j) - want));
    }
  CHECK(err < 1e-12);

  h.b_phi_min = 0.0;
  CHECK_THROWS_AS(x_prime_theta(m, h, V, uV), NotTransverse);
}

TEST_CASE("symmetric deformations produce a vanishing derivative field") {
  AxisymTorus t(2.0, 1.0);
  FourierSurface s = t.make_surface(32, 32);
  auto [m, h] = exact_fields(t, 32, 32);
  NeumannSolution uV0 = zero_solution(32, 32);

  DeformationField rot = decompose_deformation(
      [](const Vec3& p) { return Vec3{-p.y, p.x, 0}; }, s, m);
  CHECK(x_prime_theta(m, h, rot, uV0).max_abs() < 1e-11);

  DeformationField shift = decompose_deformation(
      [](const Vec3&) { return Vec3{0, 0, 1}; }, s, m);
  CHECK(x_prime_theta(m, h, shift, uV0).max_abs() < 1e-11);
}

TEST_CASE("duhamel and per-mode assemblies agree on a rigid premise") {
  double omega = 0.61803398874989485;
  NormalizedField nf = rigid_field(32, 32, omega);
  auto [map, flow] = poincare_map(nf);
  TransitionTable T = transition_factor(nf, flow);

  Grid2 xp(32, 32);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      double p = i / 32.0, q = j / 32.0;
      xp(i, j) = 0.3 + std::cos(kTwoPi * p) * (1.0 + 0.5 * std::sin(kTwoPi * q)) +
                 std::sin(2.0 * kTwoPi * q);
    }

  auto duh = pi_prime_duhamel(flow, T, xp);
  auto lin = pi_prime_linearized(omega, xp);
  double gap = 0;
  for (int j = 0; j < 32; ++j) gap = std::max(gap, std::fabs(duh[j] - lin[j]));
  CHECK(gap < 1e-9);

  // independent quadrature of the defining integral
  TrigEval2 ev(xp);
  std::vector<double> xg, wg;
  gauss_legendre(32, xg, wg);
  for (int j = 0; j < 32; j += 7) {
    double theta = j / 32.0, acc = 0;
    for (int panel = 0; panel < 8; ++panel)
      for (size_t k = 0; k < xg.size(); ++k) {
        double phi = (panel + 0.5 * (xg[k] + 1.0)) / 8.0;
        acc += 0.5 / 8.0 * wg[k] * ev.eval(phi, theta + omega * phi);
      }
    CHECK(lin[j] == Catch::Approx(acc).margin(1e-12));
  }
}

TEST_CASE("resonant modes pass through both assemblies") {
  double omega = 0.5;
  NormalizedField nf = rigid_field(32, 32, omega);
  auto [map, flow] = poincare_map(nf);
  TransitionTable T = transition_factor(nf, flow);

  Grid2 xp(32, 32);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      xp(i, j) = std::cos(kTwoPi * (i / 32.0 - 2.0 * j / 32.0));

  auto lin = pi_prime_linearized(omega, xp);
  auto duh = pi_prime_duhamel(flow, T, xp);
  for (int j = 0; j < 32; ++j) {
    double want = std::cos(2.0 * kTwoPi * j / 32.0);
    CHECK(lin[j] == Catch::Approx(want).margin(1e-12));
    CHECK(duh[j] == Catch::Approx(want).margin(1e-9));
  }
}

TEST_CASE("theta Nyquist content is averaged exactly") {
  double omega = 0.37;
  Grid2 xp(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) xp(i, j) = std::cos(kTwoPi * 4.0 * j / 8.0);
  auto lin = pi_prime_linearized(omega, xp);
  for (int j = 0; j < 8; ++j) {
    double th = j / 8.0;
    double want = (std::sin(8.0 * kPi * (th + omega)) - std::sin(8.0 * kPi * th)) /
                  (8.0 * kPi * omega);
    CHECK(lin[j] == Catch::Approx(want).margin(1e-13));
  }
}

TEST_CASE("mode average factor is smooth through zero") {
  using detail::mode_average_factor;
  CHECK(std::abs(mode_average_factor(0.0) - 1.0) == 0.0);
  auto below = mode_average_factor(1.5e-7);
  auto above = mode_average_factor(1.7e-7);
  CHECK(std::abs(below - above) < 1e-6);
  CHECK(std::abs(mode_average_factor(1.0)) < 1e-15);
  auto half = mode_average_factor(0.5);
  CHECK(half.real() == Catch::Approx(0.0).margin(1e-15));
  CHECK(half.imag() == Catch::Approx(2.0 / kPi).epsilon(1e-13));
}

TEST_CASE("deformed surfaces reproduce displaced grid points") {
  FourierSurface s = perturbed_torus(AxisymTorus(2.0, 1.0), 0.1, 2, 1, 16, 16);
  auto V = random_ambient_deformation(3);

  FourierSurface s0 = deform_surface(s, V, 0.0);
  double err0 = 0;
  for (size_t k = 0; k < s.E().x.v.size(); ++k)
    err0 = std::max({err0, std::fabs(s0.E().x.v[k] - s.E().x.v[k]),
                     std::fabs(s0.E().y.v[k] - s.E().y.v[k]),
                     std::fabs(s0.E().z.v[k] - s.E().z.v[k])});
  CHECK(err0 < 1e-12);

  double t = 0.02;
  FourierSurface st = deform_surface(s, V, t);
  double err = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      Vec3 want = s.E().at(i, j) + t * V(s.E().at(i, j));
      Vec3 got = st.E().at(i, j);
      err = std::max(err, (got - want).norm());
    }
  CHECK(err < 1e-12);
}

TEST_CASE("finite differences are blind to a rotational symmetry") {
  AxisymTorus t(2.0, 1.0);
  FourierSurface s = t.make_surface(16, 16);
  FdOptions opt;
  opt.t_list = {1e-2, 5e-3};
  FdReport rep = fd_pi_prime(
      s, [](const Vec3& p) { return Vec3{-0.3 * p.y, 0.3 * p.x, 0}; }, opt);
  REQUIRE(rep.fd.size() == 2);
  REQUIRE(rep.richardson.size() == 16);
  REQUIRE(rep.successive_diffs.size() == 1);
  CHECK(rep.sup_norms[0] < 1e-7);
  CHECK(rep.sup_norms[1] < 1e-7);
}

TEST_CASE("general assembly matches the symmetric closed form") {
  AxisymTorus t(2.0, 1.0);
  FourierSurface s = t.make_surface(24, 24);
  MetricData m = compute_metric(s);
  NeumannOperator op(s, m);
  HarmonicBoundaryField h = compute_harmonic(s, m, op);
  NormalizedField nf = normalize_toroidal(h);

  DeformationField V = decompose_deformation(random_ambient_deformation(17), s, m);
  NeumannSolution uV = op.solve(uV_datum(m, h.B, V));
  Grid2 xp = x_prime_theta(m, h, V, uV);

  auto [map, flow] = poincare_map(nf);
  TransitionTable T = transition_factor(nf, flow);
  auto duh = pi_prime_duhamel(flow, T, xp);
  auto closed = closed_form_pi_prime(t, uV);

  // both assemblies integrate the same boundary data, so they agree far
  // below the level at which either resolves the (vanishing) derivative
  double gap = 0, scale = 0;
  for (size_t j = 0; j < duh.size(); ++j) {
    gap = std::max(gap, std::fabs(duh[j] - closed[j]));
    scale = std::max(scale, std::fabs(duh[j]));
  }
  CHECK(gap < 1e-8);
  CHECK(scale < 1e-2);
}
