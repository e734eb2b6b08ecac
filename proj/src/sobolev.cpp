#include "itoquad/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace itoquad {

namespace {

void validate_norm_args(double T, double sigma, double p, int M) {
  if (!(T > 0.0)) throw std::invalid_argument("sobolev: need T > 0");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("sobolev: seminorm order sigma must lie in (0, 1)");
  if (!(p >= 1.0)) throw std::invalid_argument("sobolev: need p >= 1");
  if (M < 8) throw std::invalid_argument("sobolev: need M >= 8");
}

std::vector<double> midpoint_values(const std::function<double(double)>& v, double T,
                                    int M) {
  std::vector<double> vals((std::size_t)M);
  const double w = T / M;
  for (int i = 0; i < M; ++i) vals[(std::size_t)i] = v((i + 0.5) * w);
  return vals;
}

double lp_pow_of(const std::vector<double>& vals, double T, double p) {
  const double w = T / (double)vals.size();
  double s = 0.0;
  if (p == 2.0) {
    for (double x : vals) s += x * x;
  } else {
    for (double x : vals) s += std::pow(std::abs(x), p);
  }
  return s * w;
}

// Double integral over the off-diagonal cells; the kernel only depends on
// the index offset, so it is computed once per offset.
double semi_pow_of(const std::vector<double>& vals, double T, double sigma, double p) {
  const int M = (int)vals.size();
  const double w = T / M;
  const double expo = -(1.0 + sigma * p);
  double total = 0.0;
  for (int d = 1; d < M; ++d) {
    const double kern = std::pow(d * w, expo);
    double s = 0.0;
    if (p == 2.0) {
      for (int i = 0; i + d < M; ++i) {
        const double diff = vals[(std::size_t)(i + d)] - vals[(std::size_t)i];
        s += diff * diff;
      }
    } else {
      for (int i = 0; i + d < M; ++i)
        s += std::pow(std::abs(vals[(std::size_t)(i + d)] - vals[(std::size_t)i]), p);
    }
    total += 2.0 * kern * s;  // the (s,t) and (t,s) cells contribute equally
  }
  return total * w * w;
}

double finite_ratio_threshold() { return 1.2; }

bool ratios_diverge(const std::vector<double>& values_pow) {
  for (std::size_t k = 1; k < values_pow.size(); ++k) {
    if (!(values_pow[k] > finite_ratio_threshold() * values_pow[k - 1])) return false;
  }
  return values_pow.size() >= 2;
}

std::function<double(double)> as_fn(const Integrand& g) {
  return [&g](double t) { return g.eval(t); };
}

std::function<double(double)> deriv_fn(const Integrand& g) {
  if (!g.has_derivative())
    throw MissingDerivative("higher-order norm needs a derivative; integrand '" +
                            g.spec() + "' has none");
  return [&g](double t) { return g.derivative(t); };
}

// Least squares of log(phi) against log(h); (c0, exponent).
std::pair<double, double> loglog_fit(const std::vector<double>& hs,
                                     const std::vector<double>& phis) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = (double)hs.size();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(phis[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {std::exp(intercept), slope};
}

InitialConditionFit fit_initial(const std::vector<double>& hs,
                                const std::vector<double>& phis, double p, double sigma) {
  InitialConditionFit fit{};
  fit.required_exponent = std::max(0.0, p * sigma - 0.5 * (p - 2.0));
  std::vector<double> hs2, phis2;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (phis[i] > 0.0) {
      hs2.push_back(hs[i]);
      phis2.push_back(phis[i]);
    }
  }
  if (hs2.size() < 2) {
    // Vanishing integrand (or one supported above every h): the bound holds
    // with C0 = 0 for any exponent.
    fit.c0_hat = 0.0;
    fit.exponent_hat = std::numeric_limits<double>::infinity();
    fit.satisfied = true;
    return fit;
  }
  const auto [c0, beta] = loglog_fit(hs2, phis2);
  fit.c0_hat = c0;
  fit.exponent_hat = beta;
  fit.satisfied = beta >= fit.required_exponent - 1e-9;
  return fit;
}

}  // namespace

NormComponents norm_components(const std::function<double(double)>& v, double T,
                               double sigma, double p, int M) {
  validate_norm_args(T, sigma, p, M);
  const std::vector<double> vals = midpoint_values(v, T, M);
  return {lp_pow_of(vals, T, p), semi_pow_of(vals, T, sigma, p)};
}

double slobodeckij_seminorm(const std::function<double(double)>& v, double T,
                            double sigma, double p, int M) {
  return std::pow(norm_components(v, T, sigma, p, M).semi_pow, 1.0 / p);
}

double slobodeckij_seminorm(const Integrand& g, double T, double sigma, double p, int M) {
  return slobodeckij_seminorm(as_fn(g), T, sigma, p, M);
}

double sobolev_norm(const std::function<double(double)>& v, double T, double sigma,
                    double p, int M) {
  const NormComponents c = norm_components(v, T, sigma, p, M);
  return std::pow(c.lp_pow + c.semi_pow, 1.0 / p);
}

double sobolev_norm(const Integrand& g, double T, double sigma, double p, int M) {
  return sobolev_norm(as_fn(g), T, sigma, p, M);
}

double higher_order_norm(const Integrand& g, double T, double sigma, double p, int M) {
  validate_norm_args(T, sigma, p, M);
  const auto fn = as_fn(g);
  const auto dfn = deriv_fn(g);
  const std::vector<double> vals = midpoint_values(fn, T, M);
  const NormComponents cd = norm_components(dfn, T, sigma, p, M);
  return std::pow(lp_pow_of(vals, T, p) + cd.lp_pow + cd.semi_pow, 1.0 / p);
}

DivergenceProbe probe_divergence(const std::function<double(double)>& v, double T,
                                 double sigma, double p, int M) {
  if (M < 64) throw std::invalid_argument("probe_divergence: need M >= 64");
  DivergenceProbe probe;
  for (int m = M / 8; m <= M; m *= 2) {
    const NormComponents c = norm_components(v, T, sigma, p, m);
    probe.grids.push_back(m);
    probe.values_pow.push_back(c.semi_pow);
  }
  probe.divergent = ratios_diverge(probe.values_pow);
  return probe;
}

InitialConditionFit check_initial_condition(const Integrand& g, double p, double sigma,
                                            const std::vector<double>& hs) {
  if (hs.empty()) throw std::invalid_argument("check_initial_condition: empty h grid");
  std::vector<double> phis;
  phis.reserve(hs.size());
  for (double h : hs) {
    if (!(h > 0.0)) throw std::invalid_argument("check_initial_condition: need h > 0");
    if (p == 2.0) {
      phis.push_back(g.moment2(0.0, h));
    } else {
      const int K = 2048;
      double s = 0.0;
      for (int i = 0; i < K; ++i) s += std::pow(std::abs(g.eval((i + 0.5) * h / K)), p);
      phis.push_back(s * h / K);
    }
  }
  return fit_initial(hs, phis, p, sigma);
}

InitialConditionFit check_initial_condition_poisson(double a, double T, double p,
                                                    double sigma,
                                                    const std::vector<double>& hs,
                                                    int n_paths, RngStream& rng) {
  if (hs.empty()) throw std::invalid_argument("check_initial_condition: empty h grid");
  if (n_paths < 1) throw std::invalid_argument("check_initial_condition: need paths");
  const double h_max = *std::max_element(hs.begin(), hs.end());
  if (!(h_max <= T)) throw std::invalid_argument("check_initial_condition: h beyond horizon");
  std::vector<double> phis(hs.size(), 0.0);
  const int K = 256;
  for (int n = 0; n < n_paths; ++n) {
    const PoissonPath path = sample_poisson_path(a, h_max, rng);
    for (std::size_t k = 0; k < hs.size(); ++k) {
      double s = 0.0;
      for (int i = 0; i < K; ++i) {
        const double c = (double)eval_path(path, (i + 0.5) * hs[k] / K);
        s += p == 2.0 ? c * c : std::pow(c, p);
      }
      phis[k] += s * hs[k] / K;
    }
  }
  for (double& phi : phis) phi /= n_paths;
  return fit_initial(hs, phis, p, sigma);
}

namespace {

std::vector<double> default_h_grid(double T) {
  std::vector<double> hs;
  for (int i = 3; i <= 8; ++i) hs.push_back(T * std::pow(2.0, -i));
  return hs;
}

}  // namespace

RegularityReport regularity_report(const Integrand& g, double T, double sigma,
                                   double p, int M) {
  if (!((sigma > 0.0 && sigma < 1.0) || (sigma > 1.0 && sigma < 2.0)))
    throw std::invalid_argument("regularity_report: sigma must lie in (0,1) or (1,2)");
  RegularityReport rep;
  rep.integrand_id = g.spec();
  rep.sigma = sigma;
  rep.p = p;
  rep.M = M;
  rep.higher_order = sigma > 1.0;

  if (M < 64) throw std::invalid_argument("regularity_report: need M >= 64");
  const auto fn = as_fn(g);
  if (!rep.higher_order) {
    const DivergenceProbe probe = probe_divergence(fn, T, sigma, p, M);
    rep.probe_grids = probe.grids;
    rep.probe_norms_pow = probe.values_pow;
    rep.divergent = probe.divergent;
    if (!rep.divergent) {
      const double lp = lp_pow_of(midpoint_values(fn, T, M), T, p);
      rep.norm_estimate = std::pow(lp + probe.values_pow.back(), 1.0 / p);
    }
  } else {
    // Probe the Slobodeckij part of the derivative; the two L^p components
    // at the finest grid complete the norm when nothing diverges.
    const double frac = sigma - 1.0;
    const auto dfn = deriv_fn(g);
    NormComponents cd_finest{};
    for (int m = M / 8; m <= M; m *= 2) {
      cd_finest = norm_components(dfn, T, frac, p, m);
      rep.probe_grids.push_back(m);
      rep.probe_norms_pow.push_back(cd_finest.semi_pow);
    }
    rep.divergent = ratios_diverge(rep.probe_norms_pow);
    if (!rep.divergent) {
      const double lp = lp_pow_of(midpoint_values(fn, T, M), T, p);
      rep.norm_estimate = std::pow(lp + cd_finest.lp_pow + cd_finest.semi_pow, 1.0 / p);
    }
  }

  rep.initial = check_initial_condition(g, p, sigma, default_h_grid(T));
  return rep;
}

RegularityReport regularity_report_poisson(double a, double T, double sigma, double p,
                                           int M, int n_paths, std::uint64_t seed) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("regularity_report: poisson paths support sigma in (0,1)");
  if (M < 64) throw std::invalid_argument("regularity_report: need M >= 64");
  if (n_paths < 1) throw std::invalid_argument("regularity_report: need paths");

  RegularityReport rep;
  char id[64];
  std::snprintf(id, sizeof id, "poisson:a=%.17g", a);
  rep.integrand_id = id;
  rep.sigma = sigma;
  rep.p = p;
  rep.M = M;

  for (int m = M / 8; m <= M; m *= 2) rep.probe_grids.push_back(m);
  rep.probe_norms_pow.assign(rep.probe_grids.size(), 0.0);
  double full_pow_finest = 0.0;  // E[lp + semi] at the finest grid
  for (int n = 0; n < n_paths; ++n) {
    RngStream rng(seed, (std::uint64_t)n + 1);
    const PoissonPath path = sample_poisson_path(a, T, rng);
    const auto fn = [&path](double t) { return (double)eval_path(path, t); };
    for (std::size_t k = 0; k < rep.probe_grids.size(); ++k) {
      const NormComponents c = norm_components(fn, T, sigma, p, rep.probe_grids[k]);
      rep.probe_norms_pow[k] += c.semi_pow;
      if (k + 1 == rep.probe_grids.size()) full_pow_finest += c.lp_pow + c.semi_pow;
    }
  }
  for (double& v : rep.probe_norms_pow) v /= n_paths;
  rep.divergent = ratios_diverge(rep.probe_norms_pow);
  if (!rep.divergent)
    rep.norm_estimate = std::pow(full_pow_finest / n_paths, 1.0 / p);

  RngStream rng_ic(seed, (std::uint64_t)1 << 40);
  rep.initial = check_initial_condition_poisson(a, T, p, sigma, default_h_grid(T),
                                                n_paths, rng_ic);
  return rep;
}

}  // namespace itoquad
