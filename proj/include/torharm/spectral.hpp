#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "torharm/grid.hpp"

namespace torharm {

inline constexpr double kPi = 3.1415926535897932384626433832795;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// signed frequency of DFT bin k on an n-point grid; n/2 maps to +n/2
inline int dft_freq(int k, int n) { return k <= n / 2 ? k : k - n; }

namespace detail {

// cached FFTW plans; created with FFTW_UNALIGNED so they can run on any
// buffer. Planning is not thread-safe, execution is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  void dft2(std::complex<double>* data, int n0, int n1, int sign) {
    fftw_plan p = get(n0, n1, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
  }

 private:
  fftw_plan get(int n0, int n1, int sign) {
    std::lock_guard<std::mutex> g(mx_);
    auto key = std::make_tuple(n0, n1, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> buf(static_cast<size_t>(n0) *
                                          (n1 > 0 ? n1 : 1));
    fftw_plan p;
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    if (n1 > 0)
      p = fftw_plan_dft_2d(n0, n1, raw, raw, sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    else
      p = fftw_plan_dft_1d(n0, raw, raw, sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_[key] = p;
    return p;
  }

  std::mutex mx_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

}  // namespace detail

// in-place unnormalized DFT, layout [i0*n1 + i1]
inline void dft2(std::complex<double>* data, int n0, int n1, int sign) {
  detail::PlanCache::instance().dft2(data, n0, n1, sign);
}

inline void dft1(std::complex<double>* data, int n, int sign) {
  detail::PlanCache::instance().dft2(data, n, 0, sign);
}

// forward coefficients c_{mn} with f = sum c_{mn} exp(2 pi i (m phi + n theta));
// bin (k0,k1) holds frequency (dft_freq(k0,n_phi), dft_freq(k1,n_theta))
inline std::vector<std::complex<double>> fft2(const Grid2& g) {
  std::vector<std::complex<double>> c(g.size());
  for (size_t k = 0; k < g.size(); ++k) c[k] = g.v[k];
  dft2(c.data(), g.n_phi, g.n_theta, FFTW_FORWARD);
  double s = 1.0 / static_cast<double>(g.size());
  for (auto& z : c) z *= s;
  return c;
}

inline Grid2 ifft2(std::vector<std::complex<double>> c, int n_phi, int n_theta) {
  dft2(c.data(), n_phi, n_theta, FFTW_BACKWARD);
  Grid2 g(n_phi, n_theta);
  for (size_t k = 0; k < g.size(); ++k) g.v[k] = c[k].real();
  return g;
}

namespace detail {

inline Grid2 spectral_deriv(const Grid2& g, bool along_phi) {
  auto c = fft2(g);
  const std::complex<double> I(0, 1);
  for (int k0 = 0; k0 < g.n_phi; ++k0)
    for (int k1 = 0; k1 < g.n_theta; ++k1) {
      int f = along_phi ? dft_freq(k0, g.n_phi) : dft_freq(k1, g.n_theta);
      int n = along_phi ? g.n_phi : g.n_theta;
      if (2 * std::abs(f) == n) f = 0;  // Nyquist has no odd derivative
      c[static_cast<size_t>(k0) * g.n_theta + k1] *= kTwoPi * I * double(f);
    }
  return ifft2(std::move(c), g.n_phi, g.n_theta);
}

}  // namespace detail

inline Grid2 deriv_phi(const Grid2& g) { return detail::spectral_deriv(g, true); }
inline Grid2 deriv_theta(const Grid2& g) { return detail::spectral_deriv(g, false); }

// trigonometric interpolation onto a finer grid (Nyquist split symmetrically)
inline Grid2 upsample(const Grid2& g, int m_phi, int m_theta) {
  if (m_phi == g.n_phi && m_theta == g.n_theta) return g;
  auto c = fft2(g);
  std::vector<std::complex<double>> fine(static_cast<size_t>(m_phi) * m_theta,
                                         0.0);
  for (int k0 = 0; k0 < g.n_phi; ++k0) {
    int f0 = dft_freq(k0, g.n_phi);
    double w0 = (2 * std::abs(f0) == g.n_phi) ? 0.5 : 1.0;
    for (int k1 = 0; k1 < g.n_theta; ++k1) {
      int f1 = dft_freq(k1, g.n_theta);
      double w1 = (2 * std::abs(f1) == g.n_theta) ? 0.5 : 1.0;
      std::complex<double> val =
          w0 * w1 * c[static_cast<size_t>(k0) * g.n_theta + k1];
      for (int s0 = 0; s0 < (w0 < 1 ? 2 : 1); ++s0) {
        int ff0 = (s0 == 0) ? f0 : -f0;
        for (int s1 = 0; s1 < (w1 < 1 ? 2 : 1); ++s1) {
          int ff1 = (s1 == 0) ? f1 : -f1;
          int i0 = (ff0 + m_phi) % m_phi;
          int i1 = (ff1 + m_theta) % m_theta;
          fine[static_cast<size_t>(i0) * m_theta + i1] += val;
        }
      }
    }
  }
  return ifft2(std::move(fine), m_phi, m_theta);
}

// grid mean = (0,0) Fourier coefficient
inline double grid_mean(const Grid2& g) {
  double s = 0;
  for (double x : g.v) s += x;
  return s / static_cast<double>(g.size());
}

// evaluator for a real grid function at arbitrary (phi, theta); used by the
// field-line integrator, so the theta sweep is factored: per phi collapse the
// m sum, then run the n sum with a phase recurrence per target
class TrigEval2 {
 public:
  explicit TrigEval2(const Grid2& g) : n_phi_(g.n_phi), n_theta_(g.n_theta) {
    c_ = fft2(g);
    for (int k0 = 0; k0 < n_phi_; ++k0) {
      int f0 = dft_freq(k0, n_phi_);
      double w0 = (2 * std::abs(f0) == n_phi_) ? 0.5 : 1.0;
      for (int k1 = 0; k1 < n_theta_; ++k1) {
        int f1 = dft_freq(k1, n_theta_);
        double w1 = (2 * std::abs(f1) == n_theta_) ? 0.5 : 1.0;
        c_[static_cast<size_t>(k0) * n_theta_ + k1] *= w0 * w1;
      }
    }
  }

  // collapse the phi sum at fixed phi; out[k1] = sum_m c(m, n_k1) e(m phi),
  // where the +-Nyquist phi modes both fold into bin n_phi/2
  void collapse_phi(double phi, std::vector<std::complex<double>>& out) const {
    out.assign(n_theta_, 0.0);
    for (int k0 = 0; k0 < n_phi_; ++k0) {
      int f0 = dft_freq(k0, n_phi_);
      std::complex<double> e =
          std::polar(1.0, kTwoPi * f0 * phi);
      // split Nyquist pair shares one bin: e^{+} + e^{-} = 2 cos
      if (2 * f0 == n_phi_) e = 2.0 * std::cos(kTwoPi * f0 * phi);
      const auto* row = &c_[static_cast<size_t>(k0) * n_theta_];
      for (int k1 = 0; k1 < n_theta_; ++k1) out[k1] += e * row[k1];
    }
  }

  // evaluate at (phi, theta_t) for many theta; scratch holds the collapsed row
  void eval_theta_many(double phi, const double* thetas, double* out,
                       size_t cnt, std::vector<std::complex<double>>& scratch) const {
    collapse_phi(phi, scratch);
    int half = n_theta_ / 2;
    for (size_t t = 0; t < cnt; ++t) {
      std::complex<double> step = std::polar(1.0, kTwoPi * thetas[t]);
      std::complex<double> ph(1.0, 0.0);
      // n = 0 term, then conjugate-pair the rest (real-valued data)
      double acc = scratch[0].real();
      for (int n = 1; n <= half; ++n) {
        ph *= step;
        int kp = n;
        int kn = (n_theta_ - n) % n_theta_;
        if (kn == kp) {
          acc += 2.0 * scratch[kp].real() * ph.real();
        } else {
          acc += (scratch[kp] * ph).real() + (scratch[kn] * std::conj(ph)).real();
        }
      }
      out[t] = acc;
    }
  }

  double eval(double phi, double theta) const {
    std::vector<std::complex<double>> scratch;
    double out;
    eval_theta_many(phi, &theta, &out, 1, scratch);
    return out;
  }

 private:
  int n_phi_, n_theta_;
  std::vector<std::complex<double>> c_;
};

// 1-D helpers for circle functions on uniform grids
inline std::vector<std::complex<double>> fft1(const std::vector<double>& f) {
  std::vector<std::complex<double>> c(f.size());
  for (size_t k = 0; k < f.size(); ++k) c[k] = f[k];
  dft1(c.data(), static_cast<int>(f.size()), FFTW_FORWARD);
  double s = 1.0 / static_cast<double>(f.size());
  for (auto& z : c) z *= s;
  return c;
}

inline std::vector<double> ifft1(std::vector<std::complex<double>> c) {
  int n = static_cast<int>(c.size());
  dft1(c.data(), n, FFTW_BACKWARD);
  std::vector<double> f(c.size());
  for (size_t k = 0; k < c.size(); ++k) f[k] = c[k].real();
  return f;
}

class TrigEval1 {
 public:
  TrigEval1() = default;
  explicit TrigEval1(const std::vector<double>& samples)
      : n_(static_cast<int>(samples.size())), c_(fft1(samples)) {}
  explicit TrigEval1(std::vector<std::complex<double>> coeffs)
      : n_(static_cast<int>(coeffs.size())), c_(std::move(coeffs)) {}

  double eval(double theta) const {
    if (n_ == 0) return 0.0;
    int half = n_ / 2;
    std::complex<double> step = std::polar(1.0, kTwoPi * theta);
    std::complex<double> ph(1.0, 0.0);
    double acc = c_[0].real();
    for (int k = 1; k <= half; ++k) {
      ph *= step;
      int kn = (n_ - k) % n_;
      if (kn == k)
        acc += c_[k].real() * ph.real();  // Nyquist contributes a pure cosine
      else
        acc += (c_[k] * ph).real() + (c_[kn] * std::conj(ph)).real();
    }
    return acc;
  }

  // derivative interpolant
  TrigEval1 derivative() const {
    auto d = c_;
    const std::complex<double> I(0, 1);
    for (int k = 0; k < n_; ++k) {
      int f = dft_freq(k, n_);
      if (2 * std::abs(f) == n_) f = 0;
      d[k] *= kTwoPi * I * double(f);
    }
    return TrigEval1(std::move(d));
  }

 private:
  int n_ = 0;
  std::vector<std::complex<double>> c_;
};

}  // namespace torharm
