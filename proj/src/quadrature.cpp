#include "itoquad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace itoquad {

QuadratureResult srm_quadrature(const std::vector<double>& evals,
                                const std::vector<double>& wiener,
                                const ShiftedGrid& grid) {
  if (evals.size() != (std::size_t)grid.N)
    throw std::invalid_argument("srm_quadrature: need one evaluation per shifted node");
  if (wiener.size() != grid.nodes.size())
    throw std::invalid_argument("srm_quadrature: need one Wiener value per grid node");
  double sum = 0.0;
  for (int j = 1; j <= grid.N; ++j) {
    const double dw = wiener[grid.node_index(j + 1)] - wiener[grid.node_index(j)];
    sum += evals[(std::size_t)j - 1] * dw;
  }
  return {sum, Rule::SRM, grid.T, grid.N, grid.h, grid.shift, 0};
}

QuadratureResult trap_quadrature(const Integrand& g, const UniformGrid& grid,
                                 double theta,
                                 const std::vector<JointIncrement>& increments,
                                 bool skip_singular) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("trap_quadrature: theta must lie in [0, 1]");
  if (increments.size() != (std::size_t)grid.N)
    throw std::invalid_argument("trap_quadrature: need one increment pair per subinterval");
  double sum = 0.0;
  int skipped = 0;
  for (int j = 1; j <= grid.N; ++j) {
    double term;
    try {
      const double ga = g.eval(grid.theta_point(j, theta));
      const double gb = g.eval(grid.theta_hat_point(j, theta));
      const double gl = g.eval(grid.node(j - 1));
      const double gr = g.eval(grid.node(j));
      const JointIncrement& x = increments[(std::size_t)j - 1];
      term = 0.5 * (ga + gb) * x.x1 + (gr - gl) / grid.h * x.x2;
    } catch (const SingularEvaluation&) {
      if (!skip_singular) throw;
      ++skipped;  // drop the whole summand, per the rule's singularity policy
      continue;
    }
    sum += term;
  }
  return {sum, Rule::TRAP, grid.T, grid.N, grid.h, theta, skipped};
}

SrmSample srm_integrate(const Integrand& g, double T, int N, RngStream& rng) {
  // Shift in (0, 1]: a.s. equal in law to U(0,1) and keeps theta_1 > 0, so
  // the singular integrands stay evaluatable.
  const double shift = rng.uniform_pos();
  const ShiftedGrid grid = build_shifted_grid(T, N, shift);

  // One joint draw per grid cell; the x1 prefix-sum to Wiener values and
  // the x3 telescope to the exact integral over [0, T].
  const std::size_t cells = grid.nodes.size() - 1;
  std::vector<double> wiener(grid.nodes.size());
  wiener[0] = 0.0;
  double exact = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const JointIncrement x =
        sample_joint_increment(g, grid.nodes[k], grid.nodes[k + 1], rng);
    wiener[k + 1] = wiener[k] + x.x1;
    exact += x.x3;
  }

  std::vector<double> evals((std::size_t)N);
  for (int j = 1; j <= N; ++j) evals[(std::size_t)j - 1] = g.eval(grid.eval_point(j));

  return {srm_quadrature(evals, wiener, grid), exact};
}

TrapSample trap_integrate(const Integrand& g, double T, int N, double theta,
                          RngStream& rng, bool skip_singular) {
  const UniformGrid grid = build_uniform_grid(T, N);
  std::vector<JointIncrement> incs((std::size_t)N);
  double exact = 0.0;
  for (int j = 1; j <= N; ++j) {
    incs[(std::size_t)j - 1] = sample_joint_increment(g, grid.node(j - 1), grid.node(j), rng);
    exact += incs[(std::size_t)j - 1].x3;
  }
  return {trap_quadrature(g, grid, theta, incs, skip_singular), exact};
}

CoupledPair srm_coupled(const std::function<double(double)>& eval, double T, int N,
                        int factor, RngStream& rng) {
  if (factor < 2) throw std::invalid_argument("srm_coupled: need factor >= 2");
  const double shift = rng.uniform_pos();
  const ShiftedGrid coarse = build_shifted_grid(T, N, shift);
  const ShiftedGrid fine = build_shifted_grid(T, N * factor, shift);

  // The two shifted grids share only the endpoints (the interior offsets
  // differ), so the Brownian path lives on their sorted union and each grid
  // picks its values out by exact node lookup.
  std::vector<double> all;
  all.reserve(coarse.nodes.size() + fine.nodes.size());
  std::merge(coarse.nodes.begin(), coarse.nodes.end(), fine.nodes.begin(),
             fine.nodes.end(), std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());

  const std::vector<double> w_all = brownian_on_times(all, rng);
  auto lookup = [&](const std::vector<double>& nodes) {
    std::vector<double> w(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto it = std::lower_bound(all.begin(), all.end(), nodes[k]);
      w[k] = w_all[(std::size_t)(it - all.begin())];
    }
    return w;
  };
  const std::vector<double> w_coarse = lookup(coarse.nodes);
  const std::vector<double> w_fine = lookup(fine.nodes);

  auto evals_on = [&](const ShiftedGrid& grid) {
    std::vector<double> e((std::size_t)grid.N);
    for (int j = 1; j <= grid.N; ++j) e[(std::size_t)j - 1] = eval(grid.eval_point(j));
    return e;
  };

  return {srm_quadrature(evals_on(coarse), w_coarse, coarse),
          srm_quadrature(evals_on(fine), w_fine, fine)};
}

}  // namespace itoquad
