#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "itoquad/experiment.hpp"
#include "itoquad/poisson.hpp"
#include "itoquad/quadrature.hpp"
#include "itoquad/sobolev.hpp"

namespace py = pybind11;
using namespace itoquad;

namespace {

ExperimentConfig make_config(const std::string& integrand, const std::string& rule,
                             double theta, double p, double T, std::vector<int> levels,
                             int samples, std::uint64_t seed, const std::string& ref,
                             int fine_factor, double confidence, int threads) {
  ExperimentConfig c;
  c.integrand = integrand;
  if (rule == "srm")
    c.rule = Rule::SRM;
  else if (rule == "trap")
    c.rule = Rule::TRAP;
  else
    throw std::invalid_argument("rule must be 'srm' or 'trap'");
  c.theta = theta;
  c.p = p;
  c.T = T;
  c.levels = std::move(levels);
  c.samples = samples;
  c.seed = seed;
  if (ref == "exact")
    c.ref = ReferenceMode::ExactCoupled;
  else if (ref == "fine")
    c.ref = ReferenceMode::FineGrid;
  else
    throw std::invalid_argument("ref must be 'exact' or 'fine'");
  c.fine_factor = fine_factor;
  c.confidence = confidence;
  c.threads = threads;
  return c;
}

}  // namespace

PYBIND11_MODULE(_itoquad, m) {
  m.doc() = "Stochastic quadrature for Ito integrals: randomly shifted "
            "Riemann-Maruyama and trapezoidal rules, with convergence studies "
            "and Sobolev regularity diagnostics.";

  m.def("eval_integrand",
        [](const std::string& spec, double t) { return parse_integrand(spec)->eval(t); },
        py::arg("spec"), py::arg("t"),
        "Evaluate an integrand spec like 'sine:lambda=42' at time t.");

  m.def("moments",
        [](const std::string& spec, double t0, double t1) {
          const Moments mo = parse_integrand(spec)->moments(t0, t1);
          return py::make_tuple(mo.m0, mo.m1, mo.m2);
        },
        py::arg("spec"), py::arg("t0"), py::arg("t1"),
        "Exact (int g, int t*g, int g^2) over [t0, t1].");

  m.def("standard_normals",
        [](std::uint64_t seed, std::uint64_t stream, int n) {
          RngStream rng(seed, stream);
          std::vector<double> out((std::size_t)n);
          for (double& x : out) x = rng.standard_normal();
          return out;
        },
        py::arg("seed"), py::arg("stream") = 0, py::arg("n") = 1,
        "n i.i.d. N(0,1) draws from the (seed, stream) generator.");

  m.def("sample_joint_increment",
        [](const std::string& spec, double t0, double t1, std::uint64_t seed,
           std::uint64_t stream) {
          RngStream rng(seed, stream);
          const JointIncrement x = sample_joint_increment(*parse_integrand(spec), t0, t1, rng);
          return py::make_tuple(x.x1, x.x2, x.x3);
        },
        py::arg("spec"), py::arg("t0"), py::arg("t1"), py::arg("seed"),
        py::arg("stream") = 0,
        "Exact joint draw (dW, int (t-t_mid) dW, int g dW) on [t0, t1].");

  m.def("poisson_jump_times",
        [](double a, double T, std::uint64_t seed, std::uint64_t stream) {
          RngStream rng(seed, stream);
          return sample_poisson_path(a, T, rng).jump_times;
        },
        py::arg("a"), py::arg("T"), py::arg("seed"), py::arg("stream") = 0,
        "Jump times of one Poisson(a) path on [0, T].");

  m.def("srm_sample",
        [](const std::string& spec, double T, int N, std::uint64_t seed,
           std::uint64_t stream) {
          RngStream rng(seed, stream);
          const SrmSample s = srm_integrate(*parse_integrand(spec), T, N, rng);
          return py::make_tuple(s.approx.value, s.exact);
        },
        py::arg("spec"), py::arg("T"), py::arg("N"), py::arg("seed"),
        py::arg("stream") = 0,
        "(quadrature value, exactly coupled integral) for one shifted-grid draw.");

  m.def("slobodeckij_seminorm",
        [](const std::string& spec, double T, double sigma, double p, int M) {
          return slobodeckij_seminorm(*parse_integrand(spec), T, sigma, p, M);
        },
        py::arg("spec"), py::arg("T"), py::arg("sigma"), py::arg("p") = 2.0,
        py::arg("M") = 2048);

  m.def("sobolev_norm",
        [](const std::string& spec, double T, double sigma, double p, int M) {
          return sobolev_norm(*parse_integrand(spec), T, sigma, p, M);
        },
        py::arg("spec"), py::arg("T"), py::arg("sigma"), py::arg("p") = 2.0,
        py::arg("M") = 2048);

  m.def("regularity",
        [](const std::string& spec, double T, double sigma, double p, int M) {
          const RegularityReport r = regularity_report(*parse_integrand(spec), T, sigma, p, M);
          py::dict d;
          d["integrand"] = r.integrand_id;
          d["sigma"] = r.sigma;
          d["p"] = r.p;
          d["divergent"] = r.divergent;
          d["norm"] = r.divergent ? py::object(py::none()) : py::cast(r.norm_estimate);
          d["c0_hat"] = r.initial.c0_hat;
          d["fitted_exponent"] = r.initial.exponent_hat;
          d["required_exponent"] = r.initial.required_exponent;
          d["initial_condition_ok"] = r.initial.satisfied;
          return d;
        },
        py::arg("spec"), py::arg("T") = 1.0, py::arg("sigma") = 0.25, py::arg("p") = 2.0,
        py::arg("M") = 2048);

  m.def("run_study",
        [](const std::string& integrand, const std::string& rule, double theta, double p,
           double T, std::vector<int> levels, int samples, std::uint64_t seed,
           const std::string& ref, int fine_factor, double confidence, int threads) {
          const StudyResult res = run_convergence_study(
              make_config(integrand, rule, theta, p, T, std::move(levels), samples, seed,
                          ref, fine_factor, confidence, threads));
          py::list rows;
          for (const ConvergenceRow& r : res.rows) {
            py::dict d;
            d["h"] = r.h;
            d["error"] = r.error;
            d["eoc"] = std::isnan(r.eoc) ? py::object(py::none()) : py::cast(r.eoc);
            d["ci_low"] = r.ci_low;
            d["ci_high"] = r.ci_high;
            rows.append(d);
          }
          py::dict out;
          out["rows"] = rows;
          out["slope"] = std::isnan(res.slope) ? py::object(py::none()) : py::cast(res.slope);
          out["csv"] = to_csv(res);
          return out;
        },
        py::arg("integrand"), py::arg("rule") = "srm", py::arg("theta") = 0.0,
        py::arg("p") = 2.0, py::arg("T") = 1.0,
        py::arg("levels") = std::vector<int>{3, 4, 5, 6, 7, 8},
        py::arg("samples") = 500, py::arg("seed") = 12345, py::arg("ref") = "exact",
        py::arg("fine_factor") = 16, py::arg("confidence") = 0.95, py::arg("threads") = 0,
        "Monte Carlo convergence study; returns rows, fitted slope and the CSV text.");
}
