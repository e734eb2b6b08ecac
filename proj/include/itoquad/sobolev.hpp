#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "itoquad/integrand.hpp"
#include "itoquad/poisson.hpp"
#include "itoquad/rng.hpp"

namespace itoquad {

/// p-th powers of the two ingredients of the W^{sigma,p}(0,T) norm,
/// approximated on an M-point midpoint grid:
///   lp_pow   ~ int_0^T |v|^p dt
///   semi_pow ~ double integral of |v(t)-v(s)|^p / |t-s|^{1+sigma*p},
///              cells touching the diagonal (|t-s| < T/M) excluded.
/// The estimates increase monotonically in M on the fixed excluded band.
struct NormComponents {
  double lp_pow;
  double semi_pow;
};

NormComponents norm_components(const std::function<double(double)>& v, double T,
                               double sigma, double p, int M);

/// Slobodeckij seminorm, the p-th root of the double-integral part alone.
double slobodeckij_seminorm(const std::function<double(double)>& v, double T,
                            double sigma, double p, int M);
double slobodeckij_seminorm(const Integrand& g, double T, double sigma, double p, int M);

/// Full W^{sigma,p} norm, (L^p part + double-integral part)^{1/p}.
double sobolev_norm(const std::function<double(double)>& v, double T, double sigma,
                    double p, int M);
double sobolev_norm(const Integrand& g, double T, double sigma, double p, int M);

/// W^{1+sigma,p} norm for sigma in (0,1): L^p of v, L^p of the derivative,
/// plus the Slobodeckij seminorm of the derivative.  The midpoint grid
/// stays away from t = 0, which excludes isolated endpoint singularities
/// of the derivative the same way the diagonal band does.
/// Throws MissingDerivative if g exposes none.
double higher_order_norm(const Integrand& g, double T, double sigma, double p, int M);

/// Double-integral estimates at M/8, M/4, M/2, M.  Only that component can
/// blow up (the L^p part is a midpoint sum of a function finite on the open
/// interval, and including it would just dilute the growth ratio), so the
/// probe tracks it alone.  Divergence is flagged when every doubling grows
/// the estimate by more than 20% (ratio > 1.2 on the p-th power scale for
/// all three consecutive doublings).  Growth slower than that stays
/// indistinguishable from quadrature refinement at finite M.
struct DivergenceProbe {
  std::vector<int> grids;
  std::vector<double> values_pow;  // semi_pow at each grid
  bool divergent;
};

DivergenceProbe probe_divergence(const std::function<double(double)>& v, double T,
                                 double sigma, double p, int M);

/// Fit of int_0^h E|G(t)|^p dt ~ C0 * h^beta over a grid of h values, by
/// log-log least squares, compared against the required exponent
/// max(0, p*sigma - (p-2)/2).
struct InitialConditionFit {
  double c0_hat;
  double exponent_hat;
  double required_exponent;
  bool satisfied;
};

/// Deterministic integrand: the inner integral is the exact moment2 for
/// p = 2 and a fine midpoint sum otherwise.
InitialConditionFit check_initial_condition(const Integrand& g, double p, double sigma,
                                            const std::vector<double>& hs);

/// Poisson process: E|Pi(t)|^p estimated over n_paths sampled paths.
InitialConditionFit check_initial_condition_poisson(double a, double T, double p,
                                                    double sigma,
                                                    const std::vector<double>& hs,
                                                    int n_paths, RngStream& rng);

/// Everything the regularity CLI reports for one integrand.
struct RegularityReport {
  std::string integrand_id;
  double sigma = 0.0;
  double p = 2.0;
  int M = 0;
  bool higher_order = false;  // sigma was in (1,2), derivative-based norm used
  bool divergent = false;
  double norm_estimate = std::numeric_limits<double>::quiet_NaN();  // NaN when divergent
  std::vector<int> probe_grids;
  std::vector<double> probe_norms_pow;  // Slobodeckij component per probe grid
  InitialConditionFit initial{};
};

/// Drives the probe, the norm estimate and the initial-condition fit.
/// sigma in (0,1) uses the W^{sigma,p} norm, sigma in (1,2) the
/// derivative-based W^{sigma,p} norm (and probes divergence of that).
RegularityReport regularity_report(const Integrand& g, double T, double sigma,
                                   double p, int M);

/// Poisson variant: pathwise norms averaged over sampled paths to estimate
/// the L^p(Omega; W^{sigma,p}) norm; sigma must lie in (0,1).
RegularityReport regularity_report_poisson(double a, double T, double sigma, double p,
                                           int M, int n_paths, std::uint64_t seed);

}  // namespace itoquad
