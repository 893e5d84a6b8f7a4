#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torharm/errors.hpp"
#include "torharm/harmonic.hpp"
#include "torharm/ode.hpp"
#include "torharm/quadrature.hpp"
#include "torharm/spectral.hpp"

namespace torharm {

// sampled circle diffeomorphism through its canonical lift F, degree one:
// stored as F(theta_j) on a uniform grid, F(theta+1) = F(theta) + 1
class CircleMap {
 public:
  CircleMap() = default;
  explicit CircleMap(std::vector<double> lift_samples)
      : samples_(std::move(lift_samples)),
        disp_(make_disp(samples_)),
        interp_(disp_),
        dinterp_(interp_.derivative()) {
    int n = static_cast<int>(samples_.size());
    for (int j = 0; j + 1 < n; ++j)
      if (!(samples_[j + 1] > samples_[j]))
        throw NotTransverse("lift samples are not strictly increasing");
    if (!(samples_[0] + 1.0 > samples_[n - 1]))
      throw NotTransverse("lift fails the periodic monotonicity wrap");
  }

  const std::vector<double>& samples() const { return samples_; }
  int size() const { return static_cast<int>(samples_.size()); }

  // lift value at arbitrary theta
  double eval(double theta) const { return theta + interp_.eval(theta); }

  double derivative(double theta) const { return 1.0 + dinterp_.eval(theta); }

  CircleMap compose_after(const CircleMap& g) const {  // this o g
    std::vector<double> s(g.samples_.size());
    for (size_t j = 0; j < s.size(); ++j) s[j] = eval(g.samples_[j]);
    return CircleMap(std::move(s));
  }

  // solve F(theta) = y for theta (lift inverse); Newton with bisection guard
  double inverse_eval(double y) const {
    double shift = std::floor(y);
    double yy = y - shift;  // target reduced to [0,1)
    double lo = yy - 1.0, hi = yy + 1.0;
    double t = yy - mean_disp();
    for (int it = 0; it < 100; ++it) {
      double f = eval(t) - yy;
      if (f > 0)
        hi = std::min(hi, t);
      else
        lo = std::max(lo, t);
      double d = 1.0 + dinterp_.eval(t);
      double tn = t - (d > 1e-8 ? f / d : f);
      if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
      if (std::fabs(tn - t) < 1e-15) return tn + shift;
      t = tn;
    }
    return t + shift;
  }

  double sup_distance(const CircleMap& o) const {
    double d = 0;
    for (size_t j = 0; j < samples_.size(); ++j)
      d = std::max(d, std::fabs(samples_[j] - o.samples_[j]));
    return d;
  }

  double sup_distance_to_identity() const {
    double d = 0;
    for (double x : disp_) d = std::max(d, std::fabs(x));
    return d;
  }

  double mean_disp() const {
    double s = 0;
    for (double d : disp_) s += d;
    return s / static_cast<double>(disp_.size());
  }

 private:
  static std::vector<double> make_disp(const std::vector<double>& s) {
    std::vector<double> d(s.size());
    int n = static_cast<int>(s.size());
    for (int j = 0; j < n; ++j) d[j] = s[j] - static_cast<double>(j) / n;
    return d;
  }

  std::vector<double> samples_;
  std::vector<double> disp_;
  TrigEval1 interp_;
  TrigEval1 dinterp_;
};

// partial flow levels Pi^phi(theta_j) on uniform checkpoint times in [0,1]
struct FlowTable {
  std::vector<double> phi_levels;
  std::vector<std::vector<double>> values;  // [level][j], lift convention
};

struct PoincareOptions {
  int checkpoints = 512;  // phi levels beyond phi=0; the Duhamel quadrature
                          // converges like the 7th power of the spacing
  OdeOptions ode;
};

// integrates d theta / d phi = X^theta(phi, theta) from every grid theta
inline std::pair<CircleMap, FlowTable> poincare_map(
    const NormalizedField& nf, const PoincareOptions& opt = {}) {
  const int nt = nf.X_theta.n_theta;
  TrigEval2 xev(nf.X_theta);

  std::vector<double> y(nt);
  for (int j = 0; j < nt; ++j) y[j] = static_cast<double>(j) / nt;

  FlowTable flow;
  int L = opt.checkpoints;
  flow.phi_levels.resize(L + 1);
  flow.values.assign(L + 1, {});
  for (int l = 0; l <= L; ++l)
    flow.phi_levels[l] = static_cast<double>(l) / L;
  flow.values[0] = y;

  std::vector<double> cps(flow.phi_levels.begin() + 1, flow.phi_levels.end());
  std::vector<std::complex<double>> scratch;
  auto rhs = [&](double phi, const double* th, double* out) {
    xev.eval_theta_many(phi, th, out, static_cast<size_t>(nt), scratch);
  };
  integrate_checkpoints(
      rhs, y, 0.0, cps,
      [&](size_t level, const std::vector<double>& yy) {
        flow.values[level + 1] = yy;
      },
      opt.ode);

  return {CircleMap(flow.values.back()), flow};
}

// Duhamel transition factor T(phi_l, theta_j) =
// exp( int_phi^1 dX/dtheta(phi', Pi^phi'(theta_j)) dphi' )
struct TransitionTable {
  std::vector<double> phi_levels;
  std::vector<std::vector<double>> values;  // [level][j]
};

inline TransitionTable transition_factor(const NormalizedField& nf,
                                         const FlowTable& flow) {
  TrigEval2 dxev(nf.dX_theta_dtheta);
  const size_t L1 = flow.phi_levels.size();
  const size_t nt = flow.values[0].size();
  TransitionTable T;
  T.phi_levels = flow.phi_levels;
  T.values.assign(L1, std::vector<double>(nt, 0.0));

  // sample the integrand along each trajectory, then cumulative quadrature
  std::vector<std::vector<double>> s(L1, std::vector<double>(nt));
  std::vector<std::complex<double>> scratch;
  for (size_t l = 0; l < L1; ++l)
    dxev.eval_theta_many(flow.phi_levels[l], flow.values[l].data(),
                         s[l].data(), nt, scratch);
  double h = flow.phi_levels[1] - flow.phi_levels[0];
  std::vector<double> col(L1);
  for (size_t j = 0; j < nt; ++j) {
    for (size_t l = 0; l < L1; ++l) col[l] = s[l][j];
    auto cum = cumulative_integral(col, h);
    double total = cum.back();
    for (size_t l = 0; l < L1; ++l)
      T.values[l][j] = std::exp(total - cum[l]);
  }
  return T;
}

// Hann-weighted Birkhoff average of lift displacements
inline double rotation_number(const CircleMap& map, long iterates = 1 << 14) {
  double x = 0.0, acc = 0.0, wsum = 0.0;
  for (long n = 1; n <= iterates; ++n) {
    double xn = map.eval(x);
    double t = static_cast<double>(n) / (iterates + 1);
    double w = std::sin(M_PI * t);
    w *= w;
    acc += w * (xn - x);
    wsum += w;
    x = xn;
  }
  return acc / wsum;
}

}  // namespace torharm
