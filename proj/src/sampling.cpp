#include "itoquad/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace itoquad {

double CovarianceMatrix3::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(q[i][j]));
  return m;
}

CholeskyFactor cholesky(const CovarianceMatrix3& q) {
  const double tol = 1e-12 * std::max(q.trace(), 0.0);
  CholeskyFactor f{};
  for (int k = 0; k < 3; ++k) {
    double d = q.q[k][k];
    for (int m = 0; m < k; ++m) d -= f.l[k][m] * f.l[k][m];
    if (d < -tol) throw NotPsdError("cholesky: pivot " + std::to_string(d) + " below -tol");
    if (d <= tol) continue;  // semidefinite direction: leave the column zero
    f.l[k][k] = std::sqrt(d);
    for (int i = k + 1; i < 3; ++i) {
      double s = q.q[i][k];
      for (int m = 0; m < k; ++m) s -= f.l[i][m] * f.l[k][m];
      f.l[i][k] = s / f.l[k][k];
    }
  }
  return f;
}

CovarianceMatrix3 joint_covariance(const Integrand& g, double t0, double t1) {
  if (!(t0 < t1)) throw std::invalid_argument("joint_covariance: need t0 < t1");
  const double h = t1 - t0;
  const double t_mid = 0.5 * (t0 + t1);
  const Moments m = g.moments(t0, t1);
  CovarianceMatrix3 q{};
  q.q[0][0] = h;
  q.q[1][1] = h * h * h / 12.0;
  q.q[0][1] = q.q[1][0] = 0.0;  // DW and the centered-time integral are uncorrelated
  q.q[0][2] = q.q[2][0] = m.m0;
  q.q[1][2] = q.q[2][1] = m.m1 - t_mid * m.m0;
  q.q[2][2] = m.m2;
  return q;
}

namespace {

// Factorization for matrices assembled by joint_covariance.  Those are Gram
// matrices, PSD by construction, but on very narrow subintervals (random
// shift close to 1) the closed-form moments carry absolute roundoff near
// eps * |antiderivative|, which can push a near-zero pivot below the strict
// relative tolerance of cholesky().  Negative pivots within that assembly
// noise are clamped to zero; anything larger really is a non-PSD matrix.
CholeskyFactor cholesky_assembled(const CovarianceMatrix3& q) {
  try {
    return cholesky(q);
  } catch (const NotPsdError&) {
    const double noise = 1e-8 * (1.0 + q.max_abs());
    CholeskyFactor f{};
    for (int k = 0; k < 3; ++k) {
      double d = q.q[k][k];
      for (int m = 0; m < k; ++m) d -= f.l[k][m] * f.l[k][m];
      if (d < -noise) throw;
      if (d <= 0.0) continue;
      f.l[k][k] = std::sqrt(d);
      for (int i = k + 1; i < 3; ++i) {
        double s = q.q[i][k];
        for (int m = 0; m < k; ++m) s -= f.l[i][m] * f.l[k][m];
        f.l[i][k] = s / f.l[k][k];
      }
    }
    return f;
  }
}

}  // namespace

JointIncrement sample_joint_increment(const Integrand& g, double t0, double t1,
                                      RngStream& rng) {
  const CholeskyFactor f = cholesky_assembled(joint_covariance(g, t0, t1));
  const double z1 = rng.standard_normal();
  const double z2 = rng.standard_normal();
  const double z3 = rng.standard_normal();
  JointIncrement x;
  x.x1 = f.l[0][0] * z1;
  x.x2 = f.l[1][0] * z1 + f.l[1][1] * z2;
  x.x3 = f.l[2][0] * z1 + f.l[2][1] * z2 + f.l[2][2] * z3;
  return x;
}

std::vector<double> brownian_on_times(const std::vector<double>& times, RngStream& rng) {
  if (times.empty() || times[0] != 0.0)
    throw std::invalid_argument("brownian_on_times: times must start at 0");
  std::vector<double> w(times.size());
  w[0] = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = times[k] - times[k - 1];
    if (!(dt > 0.0))
      throw std::invalid_argument("brownian_on_times: times must be strictly increasing");
    w[k] = w[k - 1] + std::sqrt(dt) * rng.standard_normal();
  }
  return w;
}

}  // namespace itoquad
