#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <torharm/axisym.hpp>
#include <torharm/io.hpp>
#include <torharm/neumann.hpp>
#include <torharm/poincare.hpp>
#include <torharm/shape.hpp>
#include <torharm/surface.hpp>

using namespace torharm;

TEST_CASE("closed-form fields match the generic metric pipeline") {
  AxisymTorus t(2.0, 1.0);
  FourierSurface s = t.make_surface(32, 32);
  MetricData mg = compute_metric(s);
  auto [mx, h] = exact_fields(t, 32, 32);

  auto close = [](const Grid2& a, const Grid2& b) {
    return (a - b).max_abs() < 1e-10 * std::max(1.0, b.max_abs());
  };
  CHECK(close(mx.g_phiphi, mg.g_phiphi));
  CHECK(close(mx.g_phitheta, mg.g_phitheta));
  CHECK(close(mx.g_thetatheta, mg.g_thetatheta));
  CHECK(close(mx.sqrt_g, mg.sqrt_g));
  CHECK(close(mx.II_phiphi, mg.II_phiphi));
  CHECK(close(mx.II_phitheta, mg.II_phitheta));
  CHECK(close(mx.II_thetatheta, mg.II_thetatheta));
  CHECK(close(mx.normal.x, mg.normal.x));
  CHECK(close(mx.normal.y, mg.normal.y));
  CHECK(close(mx.normal.z, mg.normal.z));

  // inner equator carries the toroidal minimum of B
  double ref = 1.0 / (36.0 * kPi * kPi);
  for (int i = 0; i < 32; ++i)
    CHECK(h.B.v_phi(i, 0) == Catch::Approx(ref).epsilon(1e-13));
  CHECK(h.B.v_theta.max_abs() == 0.0);
  CHECK(mx.II_phiphi(0, 8) == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("perturbed tori stay band limited") {
  FourierSurface s = perturbed_torus(AxisymTorus(2.0, 1.0), 0.1, 2, 1, 64, 64);
  int mmax = 0, nmax = 0;
  for (const FourierMode& md : s.coeffs()) {
    mmax = std::max(mmax, std::abs(md.m));
    nmax = std::max(nmax, std::abs(md.n));
  }
  CHECK(mmax == 3);
  CHECK(nmax == 2);
}

TEST_CASE("symmetric closed form reduces a manufactured trace") {
  AxisymTorus t(2.0, 1.0);
  NeumannSolution uV;
  int np = 32, nt = 32;
  uV.trace = Grid2(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      uV.trace(i, j) = std::cos(kTwoPi * j / nt) +
                       0.3 * std::sin(kTwoPi * (i + static_cast<double>(j)) / nt);
  auto pp = closed_form_pi_prime(t, uV);
  REQUIRE(pp.size() == static_cast<size_t>(nt));
  for (int j = 0; j < nt; ++j) {
    double theta = static_cast<double>(j) / nt;
    double R = t.R(theta);
    double want = -R * R * kTwoPi * std::sin(kTwoPi * theta);
    CHECK(pp[j] == Catch::Approx(want).margin(1e-10));
  }
}

TEST_CASE("flux average check reads off the per-loop mean") {
  NeumannSolution uV;
  uV.normal_flux = Grid2(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      uV.normal_flux(i, j) = std::sin(kTwoPi * i / 16.0) * (1.0 + j);
  CHECK(toroidal_flux_average(uV) < 1e-13);
  for (double& v : uV.normal_flux.v) v += 3e-7;
  CHECK(toroidal_flux_average(uV) == Catch::Approx(3e-7).margin(1e-13));
}

TEST_CASE("averaging residual vanishes for constant weights") {
  AxisymTorus t(2.0, 1.0);
  auto [m, h] = exact_fields(t, 16, 16);
  NeumannSolution uV;
  uV.trace = Grid2(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      uV.trace(i, j) = std::sin(kTwoPi * (2.0 * i + j) / 16.0);
  Grid2 f(16, 16);
  for (double& v : f.v) v = 0.7;
  CHECK(averaging_residual(m, uV, f) < 1e-13);
}

TEST_CASE("gaussian profiles are unit mass and centered") {
  AxisymTorus t(2.0, 1.0);
  auto [m, h] = exact_fields(t, 64, 64);
  for (double eps : {0.5, 0.2, 0.1}) {
    Grid2 f = gaussian_theta_profile(t, 0.37, eps, 64, 64);
    double mass = 0;
    for (size_t k = 0; k < f.v.size(); ++k)
      mass += f.v[k] * m.sqrt_g.v[k] / (64.0 * 64.0);
    CHECK(mass == Catch::Approx(1.0).epsilon(1e-12));

    int arg = 0;
    double best = -1;
    for (int j = 0; j < 64; ++j) {
      double w = f(0, j) * t.R(j / 64.0);
      if (w > best) {
        best = w;
        arg = j;
      }
    }
    CHECK(std::abs(arg - static_cast<int>(0.37 * 64)) <= 1);
  }
}

TEST_CASE("derivative potentials obey both averaging laws") {
  AxisymTorus t(2.0, 1.0);
  FourierSurface s = t.make_surface(32, 32);
  MetricData m = compute_metric(s);
  NeumannOperator op(s, m);
  auto [mx, h] = exact_fields(t, 32, 32);

  DeformationField V = decompose_deformation(random_ambient_deformation(23), s, m);
  NeumannSolution uV = op.solve(uV_datum(m, h.B, V));

  CHECK(toroidal_flux_average(uV) < 1e-8);

  Grid2 fcos(32, 32), fsin(32, 32);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      fcos(i, j) = std::cos(kTwoPi * j / 32.0);
      fsin(i, j) = std::sin(2.0 * kTwoPi * j / 32.0);
    }
  CHECK(averaging_residual(m, uV, fcos) < 1e-4);
  CHECK(averaging_residual(m, uV, fsin) < 1e-4);
  for (double eps : {0.5, 0.2}) {
    Grid2 f = gaussian_theta_profile(t, 0.37, eps, 32, 32);
    CHECK(averaging_residual(m, uV, f) < 1e-4);
  }

  // with a symmetric deformation the potential is trivial and so are the laws
  DeformationField ez =
      decompose_deformation([](const Vec3&) { return Vec3{0, 0, 1}; }, s, m);
  NeumannSolution u0 = solve_or_zero(op, uV_datum(m, h.B, ez));
  CHECK(u0.trace.max_abs() == 0.0);
  CHECK(toroidal_flux_average(u0) == 0.0);
}

TEST_CASE("elliptical sections keep the derivative of the identity map") {
  std::vector<FourierMode> modes;
  modes.push_back({1, 0, {2.0, 0, 0}, {0, 2.0, 0}});
  modes.push_back({1, 1, {0.4, 0, 0}, {0, 0.4, 0}});
  modes.push_back({1, -1, {0.4, 0, 0}, {0, 0.4, 0}});
  modes.push_back({0, 1, {0, 0, 0}, {0, 0, 1.2}});
  FourierSurface s = build_surface(std::move(modes), 48, 48);
  MetricData m = compute_metric(s);
  NeumannOperator op(s, m);
  HarmonicBoundaryField h = compute_harmonic(s, m, op);

  // any surface of revolution carries the wire field itself
  double rel = 0;
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < 48; ++j) {
      Vec3 p = s.E().at(i, j);
      double rho2 = p.x * p.x + p.y * p.y;
      double ref = 1.0 / (4.0 * kPi * kPi * rho2);
      rel = std::max(rel, std::fabs(h.B.v_phi(i, j) - ref) / ref);
    }
  CHECK(rel < 1e-8);

  NormalizedField nf = normalize_toroidal(h);
  auto [map, flow] = poincare_map(nf);
  CHECK(map.sup_distance_to_identity() < 1e-9);

  DeformationField V = decompose_deformation(random_ambient_deformation(29), s, m);
  NeumannSolution uV = op.solve(uV_datum(m, h.B, V));
  Grid2 xp = x_prime_theta(m, h, V, uV);
  TransitionTable T = transition_factor(nf, flow);
  auto pp = pi_prime_duhamel(flow, T, xp);
  double sup = 0;
  for (double v : pp) sup = std::max(sup, std::fabs(v));
  CHECK(sup < 1e-3);
}
