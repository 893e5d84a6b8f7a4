#pragma once

#include <lapacke.h>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "torharm/errors.hpp"

namespace torharm {

// dense LU of an n x n matrix stored row-major. LAPACK sees the buffer as
// column-major, i.e. it factors A^T; solves then use trans='T', so no
// transposition copies are ever made.
class DenseLu {
 public:
  DenseLu(std::vector<double> a_rowmajor, int n, double cond_bound = 1e12)
      : n_(n), a_(std::move(a_rowmajor)), ipiv_(n) {
    double anorm = LAPACKE_dlange(LAPACK_COL_MAJOR, 'I', n_, n_, a_.data(), n_);
    int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n_, n_, a_.data(), n_,
                              ipiv_.data());
    if (info != 0)
      throw IllConditioned("LU factorization failed, info=" +
                           std::to_string(info));
    double rcond = 0;
    info = LAPACKE_dgecon(LAPACK_COL_MAJOR, 'I', n_, a_.data(), n_, anorm,
                          &rcond);
    if (info != 0 || rcond <= 0 || 1.0 / rcond > cond_bound)
      throw IllConditioned("condition estimate " +
                           std::to_string(rcond > 0 ? 1.0 / rcond : 0.0) +
                           " exceeds bound");
    cond_ = 1.0 / rcond;
  }

  // solve A x = b
  std::vector<double> solve(std::vector<double> b) const {
    int info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'T', n_, 1, a_.data(), n_,
                              ipiv_.data(), b.data(), n_);
    if (info != 0)
      throw IllConditioned("triangular solve failed, info=" +
                           std::to_string(info));
    return b;
  }

  double condition() const { return cond_; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<double> a_;
  std::vector<lapack_int> ipiv_;
  double cond_ = 0;
};

// pointwise 2x2 SPD-ish solve for tangential frames
inline void solve2x2(double a11, double a12, double a22, double b1, double b2,
                     double& x1, double& x2) {
  double det = a11 * a22 - a12 * a12;
  if (!(std::fabs(det) > 1e-14 * (std::fabs(a11 * a22) + std::fabs(a12 * a12) + 1e-300)))
    throw SingularFrame("tangential Gram matrix is numerically singular");
  x1 = (a22 * b1 - a12 * b2) / det;
  x2 = (a11 * b2 - a12 * b1) / det;
}

}  // namespace torharm
