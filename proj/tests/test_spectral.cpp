#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <torharm/grid.hpp>
#include <torharm/rng.hpp>
#include <torharm/spectral.hpp>

using namespace torharm;

namespace {

Grid2 sample(int np, int nt, double (*f)(double, double)) {
  Grid2 g(np, nt);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j)
      g(i, j) = f(static_cast<double>(i) / np, static_cast<double>(j) / nt);
  return g;
}

double test_fn(double p, double t) {
  return std::cos(kTwoPi * (3 * p - 2 * t)) + std::sin(kTwoPi * t) + 0.7 +
         0.25 * std::sin(kTwoPi * (p + 5 * t));
}
double test_fn_dp(double p, double t) {
  return -3 * kTwoPi * std::sin(kTwoPi * (3 * p - 2 * t)) +
         0.25 * kTwoPi * std::cos(kTwoPi * (p + 5 * t));
}
double test_fn_dt(double p, double t) {
  return 2 * kTwoPi * std::sin(kTwoPi * (3 * p - 2 * t)) +
         kTwoPi * std::cos(kTwoPi * t) +
         1.25 * kTwoPi * std::cos(kTwoPi * (p + 5 * t));
}

}  // namespace

TEST_CASE("dft_freq layout") {
  CHECK(dft_freq(0, 8) == 0);
  CHECK(dft_freq(3, 8) == 3);
  CHECK(dft_freq(4, 8) == 4);
  CHECK(dft_freq(5, 8) == -3);
  CHECK(dft_freq(7, 8) == -1);
}

TEST_CASE("fft2/ifft2 round trip") {
  Rng rng(11);
  Grid2 g(16, 24);
  for (auto& x : g.v) x = rng.normal();
  Grid2 back = ifft2(fft2(g), 16, 24);
  double err = 0;
  for (size_t k = 0; k < g.v.size(); ++k)
    err = std::max(err, std::fabs(g.v[k] - back.v[k]));
  CHECK(err < 1e-13);
}

TEST_CASE("spectral derivatives are exact on band-limited data") {
  Grid2 g = sample(32, 32, test_fn);
  Grid2 dp = deriv_phi(g), dt = deriv_theta(g);
  Grid2 dp_ref = sample(32, 32, test_fn_dp), dt_ref = sample(32, 32, test_fn_dt);
  double e1 = 0, e2 = 0;
  for (size_t k = 0; k < g.v.size(); ++k) {
    e1 = std::max(e1, std::fabs(dp.v[k] - dp_ref.v[k]));
    e2 = std::max(e2, std::fabs(dt.v[k] - dt_ref.v[k]));
  }
  CHECK(e1 < 1e-11);
  CHECK(e2 < 1e-11);
}

TEST_CASE("odd derivative of the Nyquist mode vanishes on the grid") {
  Grid2 g(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) g(i, j) = std::cos(kTwoPi * 4 * j / 8.0);
  CHECK(deriv_theta(g).max_abs() < 1e-13);
}

TEST_CASE("upsample reproduces band-limited values, Nyquist included") {
  auto f = [](double p, double t) {
    return std::cos(kTwoPi * (2 * p + 3 * t)) + std::cos(kTwoPi * 8 * p) +
           std::sin(kTwoPi * (p - t));
  };
  Grid2 g(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) g(i, j) = f(i / 16.0, j / 16.0);
  Grid2 up = upsample(g, 48, 80);
  double err = 0;
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < 80; ++j)
      err = std::max(err, std::fabs(up(i, j) - f(i / 48.0, j / 80.0)));
  CHECK(err < 1e-12);
}

TEST_CASE("grid_mean") {
  Grid2 g = sample(16, 16, test_fn);
  CHECK(grid_mean(g) == Catch::Approx(0.7).margin(1e-13));
}

TEST_CASE("TrigEval2 matches upsampled values at off-grid points") {
  Rng rng(3);
  Grid2 g(12, 10);
  for (auto& x : g.v) x = rng.normal();
  TrigEval2 ev(g);
  Grid2 up = upsample(g, 96, 90);
  double err = 0;
  for (int i = 0; i < 96; i += 7)
    for (int j = 0; j < 90; j += 11)
      err = std::max(err, std::fabs(ev.eval(i / 96.0, j / 90.0) - up(i, j)));
  CHECK(err < 1e-12);

  // batched evaluation agrees with scalar evaluation
  std::vector<double> thetas = {0.0, 0.123, 0.5, 0.777, 1.9, -0.3};
  std::vector<double> out(thetas.size());
  std::vector<std::complex<double>> scratch;
  ev.eval_theta_many(0.371, thetas.data(), out.data(), thetas.size(), scratch);
  for (size_t q = 0; q < thetas.size(); ++q)
    CHECK(out[q] == Catch::Approx(ev.eval(0.371, thetas[q])).margin(1e-13));
}

TEST_CASE("TrigEval2 reproduces grid samples exactly") {
  Rng rng(5);
  Grid2 g(8, 14);
  for (auto& x : g.v) x = rng.normal();
  TrigEval2 ev(g);
  double err = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 14; ++j)
      err = std::max(err, std::fabs(ev.eval(i / 8.0, j / 14.0) - g(i, j)));
  CHECK(err < 1e-12);
}

TEST_CASE("fft1/ifft1 round trip and TrigEval1") {
  Rng rng(8);
  std::vector<double> s(18);
  for (auto& x : s) x = rng.normal();
  auto back = ifft1(fft1(s));
  for (size_t k = 0; k < s.size(); ++k)
    CHECK(back[k] == Catch::Approx(s[k]).margin(1e-13));

  TrigEval1 ev(s);
  for (size_t k = 0; k < s.size(); ++k)
    CHECK(ev.eval(k / 18.0) == Catch::Approx(s[k]).margin(1e-12));
  CHECK(ev.eval(0.3) == Catch::Approx(ev.eval(1.3)).margin(1e-12));
}

TEST_CASE("TrigEval1 derivative") {
  int n = 20;
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) {
    double t = static_cast<double>(j) / n;
    s[j] = std::sin(kTwoPi * 3 * t) + 0.5 * std::cos(kTwoPi * t);
  }
  TrigEval1 d = TrigEval1(s).derivative();
  for (double t : {0.0, 0.21, 0.68}) {
    double ref =
        3 * kTwoPi * std::cos(kTwoPi * 3 * t) - 0.5 * kTwoPi * std::sin(kTwoPi * t);
    CHECK(d.eval(t) == Catch::Approx(ref).margin(1e-11));
  }
}

TEST_CASE("TrigEval1 handles a pure Nyquist mode") {
  int n = 8;
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = std::cos(kTwoPi * 4 * j / 8.0);
  TrigEval1 ev(s);
  for (int j = 0; j < n; ++j)
    CHECK(ev.eval(j / 8.0) == Catch::Approx(s[j]).margin(1e-13));
  CHECK(ev.eval(0.125 / 2) == Catch::Approx(std::cos(kTwoPi * 4 * 0.0625)).margin(1e-13));
}
