#include "itoquad/grid.hpp"

#include <stdexcept>

namespace itoquad {

ShiftedGrid build_shifted_grid(double T, int N, double shift) {
  if (N < 1) throw std::invalid_argument("build_shifted_grid: need N >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("build_shifted_grid: need T > 0");
  if (!(shift >= 0.0 && shift <= 1.0))
    throw std::invalid_argument("build_shifted_grid: shift must lie in [0, 1]");

  ShiftedGrid g;
  g.T = T;
  g.N = N;
  g.h = T / N;
  g.shift = shift;
  g.nodes.reserve((std::size_t)N + 2);
  g.nodes.push_back(0.0);
  // shift = 0 makes theta_1 coincide with the adjoined 0 and shift = 1 makes
  // theta_N coincide with the adjoined T; keep coincident nodes once.  The
  // monotonicity filter also absorbs shifts within rounding distance of 1,
  // where (N - 1 + shift) * h can land on T.
  for (int j = 1; j <= N; ++j) {
    const double v = (j - 1 + shift) * g.h;
    if (v > g.nodes.back() && v < T) g.nodes.push_back(v);
  }
  g.nodes.push_back(T);
  return g;
}

UniformGrid build_uniform_grid(double T, int N) {
  if (N < 1) throw std::invalid_argument("build_uniform_grid: need N >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("build_uniform_grid: need T > 0");
  return {T, N, T / N};
}

}  // namespace itoquad
