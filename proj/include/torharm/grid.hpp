#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace torharm {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double a) const { return {a * x, a * y, a * z}; }
  Vec3 operator/(double a) const { return {x / a, y / a, z / a}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

inline Vec3 operator*(double a, const Vec3& v) { return v * a; }

// scalar samples on the uniform periodic (phi, theta) grid,
// phi_i = i/n_phi, theta_j = j/n_theta, row-major in phi
struct Grid2 {
  int n_phi = 0, n_theta = 0;
  std::vector<double> v;

  Grid2() = default;
  Grid2(int np, int nt, double fill = 0.0)
      : n_phi(np), n_theta(nt), v(static_cast<size_t>(np) * nt, fill) {}

  double& operator()(int i, int j) { return v[static_cast<size_t>(i) * n_theta + j]; }
  double operator()(int i, int j) const { return v[static_cast<size_t>(i) * n_theta + j]; }
  size_t size() const { return v.size(); }
  bool same_shape(const Grid2& o) const {
    return n_phi == o.n_phi && n_theta == o.n_theta;
  }

  double max_abs() const {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
};

inline Grid2 operator+(const Grid2& a, const Grid2& b) {
  Grid2 r = a;
  for (size_t k = 0; k < r.v.size(); ++k) r.v[k] += b.v[k];
  return r;
}

inline Grid2 operator-(const Grid2& a, const Grid2& b) {
  Grid2 r = a;
  for (size_t k = 0; k < r.v.size(); ++k) r.v[k] -= b.v[k];
  return r;
}

inline Grid2 operator*(double a, const Grid2& g) {
  Grid2 r = g;
  for (double& x : r.v) x *= a;
  return r;
}

// pointwise product
inline Grid2 hadamard(const Grid2& a, const Grid2& b) {
  Grid2 r = a;
  for (size_t k = 0; k < r.v.size(); ++k) r.v[k] *= b.v[k];
  return r;
}

struct VecGrid2 {
  Grid2 x, y, z;

  VecGrid2() = default;
  VecGrid2(int np, int nt) : x(np, nt), y(np, nt), z(np, nt) {}

  Vec3 at(int i, int j) const { return {x(i, j), y(i, j), z(i, j)}; }
  void set(int i, int j, const Vec3& p) {
    x(i, j) = p.x;
    y(i, j) = p.y;
    z(i, j) = p.z;
  }
};

// wrap to [-1/2, 1/2)
inline double wrap_half(double t) { return t - std::floor(t + 0.5); }

// wrap to [0, 1)
inline double wrap_unit(double t) { return t - std::floor(t); }

}  // namespace torharm
