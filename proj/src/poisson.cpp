#include "itoquad/poisson.hpp"

#include <algorithm>
#include <stdexcept>

namespace itoquad {

PoissonPath sample_poisson_path(double a, double T, RngStream& rng) {
  if (!(a > 0.0)) throw std::invalid_argument("sample_poisson_path: rate must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("sample_poisson_path: horizon must be > 0");
  PoissonPath path{a, T, {}};
  double s = 0.0;
  for (;;) {
    s += sample_exponential(a, rng);
    if (s > T) break;
    path.jump_times.push_back(s);
  }
  return path;
}

int eval_path(const PoissonPath& path, double t) {
  const auto& s = path.jump_times;
  return (int)(std::upper_bound(s.begin(), s.end(), t) - s.begin());
}

}  // namespace itoquad
