#pragma once

#include <vector>

#include "itoquad/errors.hpp"
#include "itoquad/integrand.hpp"
#include "itoquad/rng.hpp"

namespace itoquad {

/// Symmetric 3x3 covariance of (DW, int (t - t_mid) dW, int g dW) on one
/// subinterval.  Stored dense; only construct through joint_covariance or
/// keep it symmetric yourself.
struct CovarianceMatrix3 {
  double q[3][3];

  double trace() const { return q[0][0] + q[1][1] + q[2][2]; }
  double max_abs() const;
};

/// Lower-triangular Cholesky factor, L * L^T = Q.
struct CholeskyFactor {
  double l[3][3];
};

/// Joint sample on one subinterval [t0, t1]:
///   x1 = W(t1) - W(t0)
///   x2 = int_{t0}^{t1} (t - (t0+t1)/2) dW
///   x3 = int_{t0}^{t1} g(t) dW            (the exact Ito integral piece)
struct JointIncrement {
  double x1;
  double x2;
  double x3;
};

/// Pivoted Cholesky for PSD matrices.  Pivots within tol of zero
/// (tol = 1e-12 * max(trace, 0)) produce a zero column, which handles the
/// rank-deficient covariances of constant and affine integrands.  A pivot
/// below -tol throws NotPsdError.
CholeskyFactor cholesky(const CovarianceMatrix3& q);

/// Covariance of (x1, x2, x3) over [t0, t1] from the exact moments of g:
///   q11 = h, q22 = h^3/12, q12 = 0,
///   q13 = int g, q23 = int t*g - t_mid * int g, q33 = int g^2.
CovarianceMatrix3 joint_covariance(const Integrand& g, double t0, double t1);

/// (x1, x2, x3) = L * (z1, z2, z3) with fresh standard normals; the joint
/// law matches joint_covariance exactly in distribution.
JointIncrement sample_joint_increment(const Integrand& g, double t0, double t1,
                                      RngStream& rng);

/// Wiener path on the given time points: W(times[0]) = 0 and independent
/// N(0, dt) increments.  times must start at 0 and be strictly increasing.
std::vector<double> brownian_on_times(const std::vector<double>& times, RngStream& rng);

}  // namespace itoquad
