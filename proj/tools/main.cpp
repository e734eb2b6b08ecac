// Command-line front end: convergence studies, reproduction presets for the
// published figures and tables, and the regularity report.
//
// Exit codes: 0 success, 1 runtime failure, 2 bad flags or unknown preset.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "itoquad/experiment.hpp"
#include "itoquad/sobolev.hpp"

using namespace itoquad;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ITOQUAD_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("ITOQUAD_SEED", "not an unsigned integer");
    }
  }
  return 12345;
}

// "3..10" or a single "5"; dyadic level exponents.
std::vector<int> parse_steps(const std::string& text) {
  const auto bad = [&text]() {
    return CLI::ValidationError("--steps", "expected i..j with 0 <= i <= j <= 30, got '" +
                                               text + "'");
  };
  int lo = 0, hi = 0;
  const std::size_t dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      std::size_t pos = 0;
      lo = hi = std::stoi(text, &pos);
      if (pos != text.size()) throw bad();
    } else {
      std::size_t pos = 0;
      lo = std::stoi(text.substr(0, dots), &pos);
      if (pos != dots) throw bad();
      const std::string rest = text.substr(dots + 2);
      hi = std::stoi(rest, &pos);
      if (pos != rest.size()) throw bad();
    }
  } catch (const CLI::ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw bad();
  }
  if (lo < 0 || hi > 30 || lo > hi) throw bad();
  std::vector<int> levels;
  for (int i = lo; i <= hi; ++i) levels.push_back(i);
  return levels;
}

void parse_ref(const std::string& text, ExperimentConfig& c) {
  if (text == "exact") {
    c.ref = ReferenceMode::ExactCoupled;
    return;
  }
  const std::string prefix = "fine:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    try {
      std::size_t pos = 0;
      const int k = std::stoi(num, &pos);
      if (pos == num.size() && k >= 2) {
        c.ref = ReferenceMode::FineGrid;
        c.fine_factor = k;
        return;
      }
    } catch (const std::exception&) {
    }
  }
  throw CLI::ValidationError("--ref", "expected 'exact' or 'fine:<k>' with k >= 2, got '" +
                                          text + "'");
}

void print_table(const StudyResult& res) {
  std::printf("  %-12s  %-13s  %-8s  %s\n", "h", "error", "eoc", "ci");
  for (const ConvergenceRow& r : res.rows) {
    char eoc_col[16];
    if (std::isnan(r.eoc))
      std::snprintf(eoc_col, sizeof eoc_col, "%s", "--");
    else
      std::snprintf(eoc_col, sizeof eoc_col, "%.4f", r.eoc);
    std::printf("  %-12.6g  %-13.8g  %-8s  [%.8g, %.8g]\n", r.h, r.error, eoc_col,
                r.ci_low, r.ci_high);
  }
  if (!std::isnan(res.slope))
    std::printf("fitted order %.4f", res.slope);
  else
    std::printf("fitted order n/a");
  std::printf("  (%d samples, seed %" PRIu64 ", %.1f s)\n", res.config.samples,
              res.config.seed, res.wall_seconds);
}

// <stem>.csv and <stem>.json next to each other; returns the csv path.
std::string write_outputs(const StudyResult& res, const std::string& stem) {
  const std::string csv_path = stem + ".csv";
  const std::string json_path = stem + ".json";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open '" + csv_path + "' for writing");
    write_csv(res, csv);
  }
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw std::runtime_error("cannot open '" + json_path + "' for writing");
  write_manifest(res, js, {csv_path, json_path});
  return csv_path;
}

int cmd_study(const ExperimentConfig& config, const std::string& out) {
  const StudyResult res = run_convergence_study(config);
  print_table(res);
  if (!out.empty()) {
    const std::string csv = write_outputs(res, out);
    std::printf("wrote %s and %s.json\n", csv.c_str(), out.c_str());
  }
  return 0;
}

// ---- reproduction presets -------------------------------------------------

struct PresetRun {
  std::string stem;  // output file stem, also the plot label
  ExperimentConfig config;
};

struct Preset {
  std::vector<PresetRun> runs;
  std::vector<double> order_lines;  // reference slopes for the plot
};

Preset make_preset(const std::string& name, bool paper_scale) {
  ExperimentConfig base;
  base.p = 2.0;
  base.samples = 2000;
  base.levels.clear();
  const int top = paper_scale ? 12 : 10;
  for (int i = 3; i <= top; ++i) base.levels.push_back(i);

  const auto pair = [&base](const std::string& integrand, const std::string& stem) {
    Preset p;
    ExperimentConfig srm = base;
    srm.integrand = integrand;
    srm.rule = Rule::SRM;
    ExperimentConfig trap = srm;
    trap.rule = Rule::TRAP;
    p.runs = {{stem + "-srm", srm}, {stem + "-trap", trap}};
    return p;
  };

  if (name == "fig1-g1") {
    Preset p = pair("sine:lambda=42", "fig1-g1");
    p.order_lines = {1.0, 2.0};
    return p;
  }
  if (name == "fig1-g2") {
    Preset p = pair("jump:c=0.5", "fig1-g2");
    p.order_lines = {0.5};
    return p;
  }
  if (name == "fig1-g3-pos") {
    Preset p = pair("power:gamma=0.5", "fig1-g3-pos");
    p.order_lines = {1.0};
    return p;
  }
  if (name == "fig1-g3-neg") {
    Preset p = pair("power:gamma=-0.3", "fig1-g3-neg");
    p.order_lines = {0.2};
    return p;
  }
  if (name == "table1") {
    Preset p = pair("jump:c=0.5", "table1");
    p.order_lines = {0.5};
    return p;
  }
  if (name == "fig2-table2") {
    Preset p;
    ExperimentConfig c = base;
    c.integrand = "poisson:a=0.75";
    c.rule = Rule::SRM;
    c.T = 10.0;
    c.ref = ReferenceMode::FineGrid;
    c.fine_factor = 16;
    c.levels.clear();
    const int jump_top = paper_scale ? 11 : 9;
    for (int i = 3; i <= jump_top; ++i) c.levels.push_back(i);
    p.runs = {{"fig2-table2", c}};
    p.order_lines = {0.5};
    return p;
  }
  throw CLI::ValidationError("preset", "unknown preset '" + name + "'");
}

void write_gnuplot(const Preset& preset, const std::vector<StudyResult>& results,
                   const std::string& path) {
  std::ofstream gp(path, std::ios::binary);
  if (!gp) throw std::runtime_error("cannot open '" + path + "' for writing");
  gp << "# log-log error plot; run: gnuplot -persist " << std::filesystem::path(path).filename().string()
     << "\n";
  gp << "set logscale xy\n";
  gp << "set datafile separator comma\n";
  gp << "set xlabel 'h'\n";
  gp << "set ylabel 'L^p error'\n";
  gp << "set key left top\n";
  gp << "plot \\\n";
  for (std::size_t i = 0; i < preset.runs.size(); ++i) {
    gp << "  '" << preset.runs[i].stem << ".csv' using 1:2 skip 1 with linespoints title '"
       << preset.runs[i].stem << "'";
    if (i + 1 < preset.runs.size() || !preset.order_lines.empty()) gp << ", \\";
    gp << "\n";
  }
  // Reference order lines anchored at the coarsest row of the first series.
  const ConvergenceRow& anchor = results.front().rows.front();
  for (std::size_t i = 0; i < preset.order_lines.size(); ++i) {
    const double slope = preset.order_lines[i];
    const double c = anchor.error / std::pow(anchor.h, slope);
    char line[128];
    std::snprintf(line, sizeof line, "  %.6g * x**%.3g dashtype 2 title 'order %.3g'",
                  c, slope, slope);
    gp << line;
    if (i + 1 < preset.order_lines.size()) gp << ", \\";
    gp << "\n";
  }
}

int cmd_reproduce(const std::string& name, const std::string& out_dir, bool paper_scale,
                  std::uint64_t seed, int samples, int threads) {
  Preset preset = make_preset(name, paper_scale);
  std::filesystem::create_directories(out_dir);
  std::vector<StudyResult> results;
  for (PresetRun& run : preset.runs) {
    run.config.seed = seed;
    run.config.threads = threads;
    if (samples > 0) run.config.samples = samples;
    std::printf("== %s ==\n", run.stem.c_str());
    results.push_back(run_convergence_study(run.config));
    print_table(results.back());
    write_outputs(results.back(), (std::filesystem::path(out_dir) / run.stem).string());
  }
  const std::string gp_path =
      (std::filesystem::path(out_dir) / (name + ".gp")).string();
  write_gnuplot(preset, results, gp_path);
  std::printf("wrote %zu csv/json pairs and %s under %s\n", results.size(),
              gp_path.c_str(), out_dir.c_str());
  return 0;
}

// ---- regularity report ----------------------------------------------------

nlohmann::json report_to_json(const RegularityReport& r) {
  nlohmann::json j;
  j["integrand"] = r.integrand_id;
  j["sigma"] = r.sigma;
  j["p"] = r.p;
  j["M"] = r.M;
  j["higher_order"] = r.higher_order;
  j["divergent"] = r.divergent;
  j["norm"] = std::isnan(r.norm_estimate) ? nlohmann::json() : nlohmann::json(r.norm_estimate);
  j["probe"]["grids"] = r.probe_grids;
  j["probe"]["norms_pow"] = r.probe_norms_pow;
  j["initial_condition"]["c0"] = r.initial.c0_hat;
  j["initial_condition"]["exponent"] =
      std::isinf(r.initial.exponent_hat) ? nlohmann::json() : nlohmann::json(r.initial.exponent_hat);
  j["initial_condition"]["required_exponent"] = r.initial.required_exponent;
  j["initial_condition"]["satisfied"] = r.initial.satisfied;
  return j;
}

int cmd_regularity(const std::string& integrand, double T, double sigma, double p, int M,
                   int paths, std::uint64_t seed, bool require_finite,
                   const std::string& out) {
  RegularityReport report;
  const std::string prefix = "poisson:a=";
  if (integrand.rfind(prefix, 0) == 0) {
    const std::string num = integrand.substr(prefix.size());
    std::size_t pos = 0;
    const double a = std::stod(num, &pos);
    if (pos != num.size() || !(a > 0.0))
      throw std::invalid_argument("bad poisson rate '" + num + "'");
    report = regularity_report_poisson(a, T, sigma, p, M, paths, seed);
  } else {
    const auto g = parse_integrand(integrand);
    report = regularity_report(*g, T, sigma, p, M);
  }
  const std::string text = report_to_json(report).dump(2) + "\n";
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + out + "' for writing");
    os << text;
  }
  if (report.divergent && require_finite) {
    std::fprintf(stderr, "regularity: norm estimate diverges and --require-finite was set\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic quadrature for Ito integrals: experiments and diagnostics"};
  app.require_subcommand(1);
  int exit_code = 0;

  // study ---------------------------------------------------------------
  ExperimentConfig config;
  std::string rule_name = "srm";
  std::string steps = "3..10";
  std::string ref_name = "exact";
  std::string study_out;
  CLI::App* study = app.add_subcommand("study", "run one convergence study");
  study->add_option("--integrand", config.integrand,
                    "integrand spec (sine:lambda=.., jump:c=.., power:gamma=.., "
                    "affine:a0=..,a1=.., poisson:a=..)")
      ->required();
  study->add_option("--rule", rule_name, "quadrature rule")
      ->check(CLI::IsMember({"srm", "trap"}));
  study->add_option("--theta", config.theta, "trap evaluation offset in [0,1]");
  study->add_option("--p", config.p, "error exponent (L^p), p >= 1");
  study->add_option("--T", config.T, "time horizon");
  study->add_option("--steps", steps, "dyadic levels i..j, h = T*2^-i .. T*2^-j");
  study->add_option("--samples", config.samples, "Monte Carlo samples per step size");
  study->add_option("--seed", config.seed, "rng seed (default ITOQUAD_SEED or 12345)");
  study->add_option("--ref", ref_name, "error reference: exact | fine:<k>");
  study->add_option("--confidence", config.confidence, "confidence level in (0,1)");
  study->add_option("--threads", config.threads, "worker threads (0 = all cores)");
  study->add_option("--out", study_out, "output file stem (writes <stem>.csv, <stem>.json)");
  study->callback([&]() {
    config.rule = rule_name == "trap" ? Rule::TRAP : Rule::SRM;
    config.levels = parse_steps(steps);
    parse_ref(ref_name, config);
    exit_code = cmd_study(config, study_out);
  });

  // reproduce -----------------------------------------------------------
  std::string preset_name;
  std::string repro_out = ".";
  bool paper_scale = false;
  std::uint64_t repro_seed = 0;
  int repro_samples = 0;
  int repro_threads = 0;
  CLI::App* repro = app.add_subcommand("reproduce", "rebuild a published figure or table");
  repro->add_option("preset", preset_name, "one of fig1-g1, fig1-g2, fig1-g3-pos, "
                                           "fig1-g3-neg, table1, fig2-table2")
      ->required()
      ->check(CLI::IsMember({"fig1-g1", "fig1-g2", "fig1-g3-pos", "fig1-g3-neg", "table1",
                             "fig2-table2"}));
  repro->add_option("--out", repro_out, "output directory");
  repro->add_flag("--paper-scale", paper_scale, "full published step range instead of the "
                                                "desk-scale default");
  repro->add_option("--seed", repro_seed, "rng seed (default ITOQUAD_SEED or 12345)");
  repro->add_option("--samples", repro_samples, "override the preset sample count");
  repro->add_option("--threads", repro_threads, "worker threads (0 = all cores)");
  repro->callback([&]() {
    const std::uint64_t seed = repro->count("--seed") ? repro_seed : default_seed();
    exit_code = cmd_reproduce(preset_name, repro_out, paper_scale, seed, repro_samples,
                              repro_threads);
  });

  // regularity ----------------------------------------------------------
  std::string reg_integrand;
  double reg_T = 1.0, reg_sigma = 0.0, reg_p = 2.0;
  int reg_M = 2048, reg_paths = 256;
  std::uint64_t reg_seed = 0;
  bool require_finite = false;
  std::string reg_out;
  CLI::App* reg = app.add_subcommand("regularity", "fractional Sobolev diagnostics as JSON");
  reg->add_option("--integrand", reg_integrand, "integrand spec or poisson:a=..")->required();
  reg->add_option("--sigma", reg_sigma, "smoothness order, (0,1) or (1,2)")->required();
  reg->add_option("--p", reg_p, "integrability exponent, p >= 1");
  reg->add_option("--M", reg_M, "grid points for the double integral");
  reg->add_option("--T", reg_T, "time horizon");
  reg->add_option("--paths", reg_paths, "sampled paths (poisson only)");
  reg->add_option("--seed", reg_seed, "rng seed (default ITOQUAD_SEED or 12345)");
  reg->add_flag("--require-finite", require_finite,
                "exit nonzero when divergence is flagged");
  reg->add_option("--out", reg_out, "write the JSON here instead of stdout");
  reg->callback([&]() {
    const std::uint64_t seed = reg->count("--seed") ? reg_seed : default_seed();
    exit_code = cmd_regularity(reg_integrand, reg_T, reg_sigma, reg_p, reg_M, reg_paths,
                               seed, require_finite, reg_out);
  });

  try {
    config.seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
