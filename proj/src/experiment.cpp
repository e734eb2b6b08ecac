#include "itoquad/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "itoquad/poisson.hpp"

namespace itoquad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Integrand spec plus the one process spec ("poisson:a=<rate>") the study
// accepts in the same slot.
struct ResolvedIntegrand {
  std::unique_ptr<Integrand> g;  // null for the Poisson process
  double poisson_rate = 0.0;
  bool is_poisson = false;
};

ResolvedIntegrand resolve_integrand(const std::string& spec) {
  ResolvedIntegrand r;
  const std::string prefix = "poisson:a=";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string num = spec.substr(prefix.size());
    std::size_t pos = 0;
    double a;
    try {
      a = std::stod(num, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad poisson rate '" + num + "'");
    }
    if (pos != num.size()) throw std::invalid_argument("bad poisson rate '" + num + "'");
    if (!(a > 0.0)) throw std::invalid_argument("poisson rate must be > 0");
    r.is_poisson = true;
    r.poisson_rate = a;
    return r;
  }
  r.g = parse_integrand(spec);
  return r;
}

void validate_config(const ExperimentConfig& c, const ResolvedIntegrand& r) {
  if (!(c.T > 0.0)) throw std::invalid_argument("study: need T > 0");
  if (c.samples < 2) throw std::invalid_argument("study: need at least 2 samples");
  if (c.levels.empty()) throw std::invalid_argument("study: empty step-size list");
  for (int i : c.levels)
    if (i < 0 || i > 30) throw std::invalid_argument("study: step exponent out of range");
  if (!(c.p >= 1.0)) throw std::invalid_argument("study: need p >= 1");
  if (!(c.confidence > 0.0 && c.confidence < 1.0))
    throw std::invalid_argument("study: confidence level must lie in (0, 1)");
  if (!(c.theta >= 0.0 && c.theta <= 1.0))
    throw std::invalid_argument("study: theta must lie in [0, 1]");
  if (c.fine_factor < 2) throw std::invalid_argument("study: need fine factor >= 2");
  if (r.is_poisson) {
    // No closed-form moments, so only the fine-grid-referenced SRM rule
    // applies to the jump process.
    if (c.rule != Rule::SRM)
      throw std::invalid_argument("study: the poisson integrand supports the srm rule only");
    if (c.ref != ReferenceMode::FineGrid)
      throw std::invalid_argument("study: the poisson integrand needs --ref fine:<k>");
  } else if (c.rule == Rule::TRAP && c.ref != ReferenceMode::ExactCoupled) {
    throw std::invalid_argument("study: the trap rule supports --ref exact only");
  }
}

double run_sample_impl(const ResolvedIntegrand& r, const ExperimentConfig& c, int N,
                       RngStream& rng) {
  if (r.is_poisson) {
    const PoissonPath path = sample_poisson_path(r.poisson_rate, c.T, rng);
    const auto fn = [&path](double t) { return (double)eval_path(path, t); };
    const CoupledPair pair = srm_coupled(fn, c.T, N, c.fine_factor, rng);
    return std::abs(pair.fine.value - pair.coarse.value);
  }
  if (c.rule == Rule::SRM) {
    if (c.ref == ReferenceMode::ExactCoupled) {
      const SrmSample s = srm_integrate(*r.g, c.T, N, rng);
      return std::abs(s.exact - s.approx.value);
    }
    const auto fn = [&r](double t) { return r.g->eval(t); };
    const CoupledPair pair = srm_coupled(fn, c.T, N, c.fine_factor, rng);
    return std::abs(pair.fine.value - pair.coarse.value);
  }
  const TrapSample s = trap_integrate(*r.g, c.T, N, c.theta, rng, /*skip_singular=*/true);
  return std::abs(s.exact - s.approx.value);
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("normal_quantile: argument must lie in (0, 1)");
  // Acklam's rational approximation, then one Halley step against erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (q < plow) {
    const double u = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (q <= 1.0 - plow) {
    const double u = q - 0.5;
    const double t = u * u;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * u /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - q));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - q;
  const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double lp_error(const std::vector<double>& realizations, double p) {
  if (realizations.empty()) throw std::invalid_argument("lp_error: empty input");
  double s = 0.0;
  for (double e : realizations) s += std::pow(std::abs(e), p);
  return std::pow(s / (double)realizations.size(), 1.0 / p);
}

std::pair<double, double> confidence_interval(const std::vector<double>& realizations,
                                              double p, double level) {
  if (realizations.empty()) throw std::invalid_argument("confidence_interval: empty input");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("confidence_interval: level must lie in (0, 1)");
  const double n = (double)realizations.size();
  double sum = 0.0;
  for (double e : realizations) sum += std::pow(std::abs(e), p);
  const double mean = sum / n;
  double ss = 0.0;
  for (double e : realizations) {
    const double d = std::pow(std::abs(e), p) - mean;
    ss += d * d;
  }
  const double sd = n > 1.0 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * sd / std::sqrt(n);
  const double lo = std::max(0.0, mean - half);
  const double hi = mean + half;
  return {std::pow(lo, 1.0 / p), std::pow(hi, 1.0 / p)};
}

double eoc(double error_coarse, double error_fine, double h_coarse, double h_fine) {
  if (!(error_coarse > 0.0) || !(error_fine > 0.0) || !(h_coarse > 0.0) || !(h_fine > 0.0))
    throw std::invalid_argument("eoc: all arguments must be positive");
  return std::log(error_coarse / error_fine) / std::log(h_coarse / h_fine);
}

std::pair<double, double> fit_order(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 3) throw std::invalid_argument("fit_order: need at least 3 rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const ConvergenceRow& r : rows) {
    if (!(r.error > 0.0)) throw std::invalid_argument("fit_order: errors must be positive");
    const double x = std::log(r.h);
    const double y = std::log(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = (double)rows.size();
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_order: degenerate step sizes");
  const double slope = (n * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / n};
}

double run_sample(const ExperimentConfig& config, int N, RngStream& rng) {
  const ResolvedIntegrand r = resolve_integrand(config.integrand);
  validate_config(config, r);
  if (N < 1) throw std::invalid_argument("run_sample: need N >= 1");
  return run_sample_impl(r, config, N, rng);
}

StudyResult run_convergence_study(const ExperimentConfig& config) {
  const ResolvedIntegrand r = resolve_integrand(config.integrand);
  validate_config(config, r);

  const auto t_start = std::chrono::steady_clock::now();

  StudyResult result;
  result.config = config;
  std::sort(result.config.levels.begin(), result.config.levels.end());
  const std::vector<int>& levels = result.config.levels;

  int n_threads = config.threads > 0 ? config.threads
                                     : (int)std::thread::hardware_concurrency();
  n_threads = std::max(1, std::min(n_threads, config.samples));

  for (std::size_t li = 0; li < levels.size(); ++li) {
    const int N = 1 << levels[li];
    const double h = config.T / (double)N;
    std::vector<double> errs((std::size_t)config.samples);

    // One private stream per (level, sample): workers fill disjoint slots
    // and the reduction below runs in sample order, so the result does not
    // depend on the thread count.
    auto worker = [&](int begin, int end, std::exception_ptr& ep) {
      try {
        for (int s = begin; s < end; ++s) {
          RngStream rng(config.seed, ((std::uint64_t)(li + 1) << 32) | (std::uint64_t)s);
          errs[(std::size_t)s] = run_sample_impl(r, config, N, rng);
        }
      } catch (...) {
        ep = std::current_exception();
      }
    };

    if (n_threads == 1) {
      std::exception_ptr ep;
      worker(0, config.samples, ep);
      if (ep) std::rethrow_exception(ep);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> eps((std::size_t)n_threads);
      for (int t = 0; t < n_threads; ++t) {
        const int begin = (int)((long long)config.samples * t / n_threads);
        const int end = (int)((long long)config.samples * (t + 1) / n_threads);
        pool.emplace_back(worker, begin, end, std::ref(eps[(std::size_t)t]));
      }
      for (std::thread& th : pool) th.join();
      for (const std::exception_ptr& ep : eps)
        if (ep) std::rethrow_exception(ep);
    }

    const double err = lp_error(errs, config.p);
    const auto [lo, hi] = confidence_interval(errs, config.p, config.confidence);
    double e = kNaN;
    if (li > 0 && result.rows.back().error > 0.0 && err > 0.0)
      e = eoc(result.rows.back().error, err, result.rows.back().h, h);
    result.rows.push_back({h, err, e, lo, hi});
  }

  result.slope = kNaN;
  result.intercept = kNaN;
  const bool fittable = result.rows.size() >= 3 &&
                        std::all_of(result.rows.begin(), result.rows.end(),
                                    [](const ConvergenceRow& row) { return row.error > 0.0; });
  if (fittable) {
    const auto [s, i] = fit_order(result.rows);
    result.slope = s;
    result.intercept = i;
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

namespace {

std::string g10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_csv(const StudyResult& result, std::ostream& os) {
  os << "h,error,eoc,ci_low,ci_high\n";
  for (const ConvergenceRow& r : result.rows) {
    os << g10(r.h) << ',' << g10(r.error) << ',';
    if (!std::isnan(r.eoc)) os << g10(r.eoc);
    os << ',' << g10(r.ci_low) << ',' << g10(r.ci_high) << '\n';
  }
}

std::string to_csv(const StudyResult& result) {
  std::ostringstream ss;
  write_csv(result, ss);
  return ss.str();
}

void write_manifest(const StudyResult& result, std::ostream& os,
                    const std::vector<std::string>& outputs) {
  const ExperimentConfig& c = result.config;
  nlohmann::json j;
  j["tool"] = "itoquad";
  j["version"] = "0.1.0";
  j["timestamp"] = iso_timestamp();
  j["config"]["integrand"] = c.integrand;
  j["config"]["rule"] = c.rule == Rule::SRM ? "srm" : "trap";
  j["config"]["theta"] = c.theta;
  j["config"]["p"] = c.p;
  j["config"]["T"] = c.T;
  j["config"]["levels"] = c.levels;
  j["config"]["samples"] = c.samples;
  j["config"]["seed"] = c.seed;
  j["config"]["ref"] = c.ref == ReferenceMode::ExactCoupled
                           ? "exact"
                           : "fine:" + std::to_string(c.fine_factor);
  j["config"]["confidence"] = c.confidence;
  j["config"]["threads"] = c.threads;
  j["fitted_slope"] = std::isnan(result.slope) ? nlohmann::json() : nlohmann::json(result.slope);
  j["fitted_intercept"] =
      std::isnan(result.intercept) ? nlohmann::json() : nlohmann::json(result.intercept);
  j["wall_seconds"] = result.wall_seconds;
  j["outputs"] = outputs;
  j["clt_valid"] = c.samples >= 30;  // below that the normal interval is indicative only
  j["ci_note"] =
      "interval is CLT-based for the mean of |error|^p, endpoints mapped through the "
      "p-th root (negative lower endpoint clamped to 0)";
  os << j.dump(2) << '\n';
}

}  // namespace itoquad
