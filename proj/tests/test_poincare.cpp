#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <torharm/harmonic.hpp>
#include <torharm/poincare.hpp>
#include <torharm/rng.hpp>
#include <torharm/spectral.hpp>

using namespace torharm;

namespace {

NormalizedField synth(int np, int nt, double (*f)(double, double)) {
  NormalizedField nf;
  nf.X_theta = Grid2(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      nf.X_theta(i, j) =
          f(static_cast<double>(i) / np, static_cast<double>(j) / nt);
  nf.dX_theta_dtheta = deriv_theta(nf.X_theta);
  nf.b_phi = Grid2(np, nt);
  for (auto& x : nf.b_phi.v) x = 1.0;
  return nf;
}

double arnold_lift(double x) {
  return x + 0.3 + 0.1 * std::sin(kTwoPi * x) / kTwoPi;
}

}  // namespace

TEST_CASE("zero field gives the identity map") {
  auto nf = synth(16, 32, [](double, double) { return 0.0; });
  auto [map, flow] = poincare_map(nf);
  CHECK(map.sup_distance_to_identity() < 1e-13);
  CHECK(std::fabs(rotation_number(map)) < 1e-13);
}

TEST_CASE("constant field gives a rigid rotation") {
  auto nf = synth(16, 32, [](double, double) { return 0.37; });
  auto [map, flow] = poincare_map(nf);
  for (int j = 0; j < 32; ++j)
    CHECK(map.samples()[j] ==
          Catch::Approx(j / 32.0 + 0.37).margin(1e-11));
  CHECK(rotation_number(map) == Catch::Approx(0.37).margin(1e-9));
}

TEST_CASE("phi-dependent zero-mean field closes up to the identity") {
  auto nf = synth(32, 16, [](double p, double) {
    return 0.8 * std::cos(kTwoPi * p);
  });
  auto [map, flow] = poincare_map(nf);
  CHECK(map.sup_distance_to_identity() < 1e-11);

  // partial flow matches the explicit antiderivative
  size_t mid = flow.phi_levels.size() / 2;
  double phi = flow.phi_levels[mid];
  double expect = 0.8 * std::sin(kTwoPi * phi) / kTwoPi;
  for (int j = 0; j < 16; ++j)
    CHECK(flow.values[mid][j] ==
          Catch::Approx(j / 16.0 + expect).margin(1e-11));
}

TEST_CASE("transition factor at phi = 0 is the map derivative") {
  auto nf = synth(32, 32, [](double p, double t) {
    return 0.15 * std::sin(kTwoPi * t) + 0.05 * std::cos(kTwoPi * (p + t));
  });
  auto [map, flow] = poincare_map(nf);
  TransitionTable T = transition_factor(nf, flow);
  REQUIRE(T.values.size() == flow.phi_levels.size());
  for (int j = 0; j < 32; ++j) {
    CHECK(T.values[0][j] ==
          Catch::Approx(map.derivative(j / 32.0)).margin(1e-8));
    CHECK(T.values.back()[j] == Catch::Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("separable field matches the closed-form flow") {
  // dtheta/dphi = eps sin(2 pi theta): tan(pi theta) grows by exp(2 pi eps phi)
  double eps = 0.1;
  auto nf = synth(16, 64, [](double, double t) {
    return 0.1 * std::sin(kTwoPi * t);
  });
  auto [map, flow] = poincare_map(nf);
  for (int j = 1; j < 64; ++j) {
    double t0 = j / 64.0;
    if (std::fabs(t0 - 0.5) < 1e-9) continue;
    double tn = std::tan(kPi * t0) * std::exp(kTwoPi * eps);
    double exact = std::atan(tn) / kPi;
    if (t0 > 0.5) exact += 1.0;
    CHECK(wrap_half(map.samples()[j] - exact) == Catch::Approx(0.0).margin(1e-10));
  }
}

TEST_CASE("lift monotonicity is enforced") {
  std::vector<double> bad = {0.0, 0.4, 0.3, 0.8};
  CHECK_THROWS_AS(CircleMap(bad), NotTransverse);
  std::vector<double> steep(8);
  for (int j = 0; j < 8; ++j)
    steep[j] = j / 8.0 + 0.5 * std::sin(kTwoPi * j / 8.0);  // slope dips < 0
  CHECK_THROWS_AS(CircleMap(steep), NotTransverse);
}

TEST_CASE("inverse evaluation inverts the lift") {
  std::vector<double> lift(64);
  for (int j = 0; j < 64; ++j) {
    double x = j / 64.0;
    lift[j] = x + 0.25 + 0.12 * std::sin(kTwoPi * x);
  }
  CircleMap f(lift);
  Rng rng(15);
  for (int k = 0; k < 24; ++k) {
    double y = rng.uniform(-2.0, 3.0);
    CHECK(f.eval(f.inverse_eval(y)) == Catch::Approx(y).margin(1e-12));
  }
}

TEST_CASE("rotation number is invariant under conjugation") {
  std::vector<double> lf(128), lh(128);
  for (int j = 0; j < 128; ++j) {
    double x = j / 128.0;
    lf[j] = x + 0.61803398874989485;
    lh[j] = x + 0.1 * std::sin(kTwoPi * x);
  }
  CircleMap f(lf), h(lh);
  // samples of h o f o h^{-1}
  std::vector<double> conj(128);
  for (int j = 0; j < 128; ++j)
    conj[j] = h.eval(f.eval(h.inverse_eval(j / 128.0)));
  CircleMap g(conj);
  CHECK(rotation_number(g) ==
        Catch::Approx(rotation_number(f)).margin(2e-6));
}

TEST_CASE("composition of sampled maps") {
  std::vector<double> la(64), lb(64);
  for (int j = 0; j < 64; ++j) {
    double x = j / 64.0;
    la[j] = x + 0.2 + 0.05 * std::sin(kTwoPi * x);
    lb[j] = x + 0.1 - 0.04 * std::cos(kTwoPi * x);
  }
  CircleMap a(la), b(lb);
  CircleMap ab = a.compose_after(b);
  for (double x : {0.13, 0.5, 0.92})
    CHECK(ab.eval(x) == Catch::Approx(a.eval(b.eval(x))).margin(1e-10));
}

TEST_CASE("rigid rotation number is recovered at short range") {
  std::vector<double> lift(64);
  for (int j = 0; j < 64; ++j) lift[j] = j / 64.0 + 0.61803398874989485;
  CircleMap f(lift);
  CHECK(std::fabs(rotation_number(f, 1 << 14) - 0.61803398874989485) < 1e-6);
}

TEST_CASE("perturbed rotation matches a long brute-force orbit") {
  int n = 512;
  std::vector<double> lift(n);
  for (int j = 0; j < n; ++j) lift[j] = arnold_lift(static_cast<double>(j) / n);
  CircleMap f(lift);
  double est = rotation_number(f, 1 << 14);

  double x = 0.0;
  const long N = 1000000;
  for (long k = 0; k < N; ++k) x = arnold_lift(x);
  double brute = x / N;
  CHECK(std::fabs(est - brute) < 1e-6);
}
