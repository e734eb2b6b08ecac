#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "itoquad/quadrature.hpp"

namespace itoquad {

enum class ReferenceMode {
  ExactCoupled,  // exact integral from the joint sampler on the rule's own grid
  FineGrid       // same rule at step h/factor on a shared Brownian path
};

/// Full description of one convergence study.  Step sizes are the dyadic
/// family h_i = T * 2^{-i} for i in `levels`.
struct ExperimentConfig {
  std::string integrand;  // integrand spec, or "poisson:a=<rate>"
  Rule rule = Rule::SRM;
  double theta = 0.0;  // TRAP parameter
  double p = 2.0;      // error exponent
  double T = 1.0;
  std::vector<int> levels = {3, 4, 5, 6, 7, 8, 9, 10};
  int samples = 2000;
  std::uint64_t seed = 12345;
  ReferenceMode ref = ReferenceMode::ExactCoupled;
  int fine_factor = 16;
  double confidence = 0.95;
  int threads = 0;  // 0 = hardware concurrency
};

/// One table row: step size, L^p error, pairwise EOC against the previous
/// row (NaN in the first row), and the confidence interval on the error.
struct ConvergenceRow {
  double h;
  double error;
  double eoc;
  double ci_low;
  double ci_high;
};

struct StudyResult {
  ExperimentConfig config;
  std::vector<ConvergenceRow> rows;  // sorted by decreasing h
  double slope;                      // least-squares order over all rows
  double intercept;
  double wall_seconds;
};

/// Inverse standard normal CDF (Acklam's rational approximation polished by
/// one Halley step); used for the CLT interval z-values.
double normal_quantile(double q);

/// (mean of e^p)^(1/p).
double lp_error(const std::vector<double>& realizations, double p);

/// CLT interval for the mean of e^p, endpoints mapped through the p-th
/// root; a negative lower endpoint is clamped to 0 before the root.
std::pair<double, double> confidence_interval(const std::vector<double>& realizations,
                                              double p, double level);

/// log(error_coarse/error_fine) / log(h_coarse/h_fine).
double eoc(double error_coarse, double error_fine, double h_coarse, double h_fine);

/// Least-squares fit of log(error) against log(h) over the rows;
/// (slope, intercept).  Needs at least 3 rows with positive errors.
std::pair<double, double> fit_order(const std::vector<ConvergenceRow>& rows);

/// One error realization |I[G] - Q_N[G]| for grid size N = 2^level, drawn
/// from the given stream.  The study derives one stream per (level, sample)
/// so parallel and serial runs agree bit for bit.
double run_sample(const ExperimentConfig& config, int N, RngStream& rng);

StudyResult run_convergence_study(const ExperimentConfig& config);

/// CSV with header `h,error,eoc,ci_low,ci_high`, 10 significant digits,
/// LF line endings; eoc empty in the first row.  Byte-stable across rerun
/// and thread counts for a fixed seed.
void write_csv(const StudyResult& result, std::ostream& os);
std::string to_csv(const StudyResult& result);

/// JSON run manifest: resolved config, fitted order, wall time, the
/// interval-construction note, and the files the run produced.
void write_manifest(const StudyResult& result, std::ostream& os,
                    const std::vector<std::string>& outputs = {});

}  // namespace itoquad
