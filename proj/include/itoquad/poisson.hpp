#pragma once

#include <vector>

#include "itoquad/rng.hpp"

namespace itoquad {

/// One Poisson sample path on [0, T]: the jump times S_k = Z_1 + ... + Z_k
/// that landed inside the horizon.  Immutable after construction, so a
/// single path can back both the coarse quadrature and its fine reference.
struct PoissonPath {
  double intensity;
  double horizon;
  std::vector<double> jump_times;  // strictly increasing, all <= horizon
};

/// Cumulative sums of i.i.d. Exp(a) interarrival times, stopped at the
/// first sum beyond T (that sum is not stored).
PoissonPath sample_poisson_path(double a, double T, RngStream& rng);

/// Number of jumps up to and including t; right continuous, eval(0) = 0.
int eval_path(const PoissonPath& path, double t);

}  // namespace itoquad
