#pragma once

#include <functional>
#include <vector>

#include "itoquad/grid.hpp"
#include "itoquad/integrand.hpp"
#include "itoquad/sampling.hpp"

namespace itoquad {

enum class Rule { SRM, TRAP };

struct QuadratureResult {
  double value;
  Rule rule;
  double T;
  int N;
  double h;
  double shift_or_theta;  // grid shift Theta for SRM, rule parameter theta for TRAP
  int skipped_terms = 0;  // summands dropped by the singularity skip rule (TRAP)
};

/// Randomly shifted Riemann-Maruyama rule:
///   sum_{j=1..N} g(theta_j) * (W(theta_{j+1}) - W(theta_j)).
/// evals[j-1] = g(theta_j); wiener holds W at every grid node (same order
/// and length as grid.nodes).  The initial piece [0, theta_1] contributes
/// nothing by construction of the rule.
QuadratureResult srm_quadrature(const std::vector<double>& evals,
                                const std::vector<double>& wiener,
                                const ShiftedGrid& grid);

/// Generalized stochastic trapezoidal rule:
///   sum_j [ (g(theta_j) + g(theta_hat_j))/2 * x1_j
///           + (g(t_j) - g(t_{j-1}))/h * x2_j ]
/// with x1_j = W(t_j) - W(t_{j-1}) and x2_j = int (t - t_{j-1/2}) dW taken
/// from increments[j-1] (the x3 member is ignored).  When skip_singular is
/// set, summands whose evaluations hit a singularity are dropped and
/// counted in skipped_terms; otherwise SingularEvaluation propagates.
QuadratureResult trap_quadrature(const Integrand& g, const UniformGrid& grid,
                                 double theta,
                                 const std::vector<JointIncrement>& increments,
                                 bool skip_singular = false);

/// One SRM sample with its exactly coupled reference: a uniform shift is
/// drawn, joint increments (x1, x2, x3) are sampled on every grid cell, the
/// rule consumes the Wiener values built from the x1 and the exact integral
/// is the telescoped sum of the x3.
struct SrmSample {
  QuadratureResult approx;
  double exact;
};

SrmSample srm_integrate(const Integrand& g, double T, int N, RngStream& rng);

/// TRAP counterpart of srm_integrate on the uniform grid.
struct TrapSample {
  QuadratureResult approx;
  double exact;
};

TrapSample trap_integrate(const Integrand& g, double T, int N, double theta,
                          RngStream& rng, bool skip_singular = true);

/// Coarse/fine SRM pair for integrands without closed-form moments
/// (Poisson paths).  Both rules share one uniform shift and one Brownian
/// path sampled on the union of the two shifted grids, so the fine value
/// (step h/factor) serves as the coupled reference for the coarse one.
struct CoupledPair {
  QuadratureResult coarse;
  QuadratureResult fine;
};

CoupledPair srm_coupled(const std::function<double(double)>& eval, double T, int N,
                        int factor, RngStream& rng);

}  // namespace itoquad
