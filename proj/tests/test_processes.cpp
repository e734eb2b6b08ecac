#include <doctest.h>

#include <cmath>
#include <vector>

#include "itoquad/poisson.hpp"
#include "itoquad/rng.hpp"

using namespace itoquad;

TEST_CASE("path evaluation") {
  const PoissonPath path{1.0, 10.0, {1.0, 2.5}};
  CHECK(eval_path(path, 0.0) == 0);
  CHECK(eval_path(path, 0.999) == 0);
  CHECK(eval_path(path, 1.0) == 1);  // right continuous at a jump
  CHECK(eval_path(path, 2.49999) == 1);
  CHECK(eval_path(path, 2.5) == 2);
  CHECK(eval_path(path, 10.0) == 2);

  const PoissonPath empty{1.0, 10.0, {}};
  CHECK(eval_path(empty, 10.0) == 0);
}

TEST_CASE("sampler validation and determinism") {
  RngStream rng(5, 0);
  CHECK_THROWS_AS(sample_poisson_path(0.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_poisson_path(-1.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_poisson_path(1.0, 0.0, rng), std::invalid_argument);

  RngStream a(5, 1), b(5, 1);
  const PoissonPath pa = sample_poisson_path(0.75, 10.0, a);
  const PoissonPath pb = sample_poisson_path(0.75, 10.0, b);
  CHECK(pa.jump_times == pb.jump_times);
  for (std::size_t k = 1; k < pa.jump_times.size(); ++k)
    CHECK(pa.jump_times[k] > pa.jump_times[k - 1]);
  if (!pa.jump_times.empty()) {
    CHECK(pa.jump_times.front() > 0.0);
    CHECK(pa.jump_times.back() <= 10.0);
  }
}

TEST_CASE("unit jumps exactly at the stored jump times") {
  RngStream rng(6, 2);
  const PoissonPath path = sample_poisson_path(0.75, 10.0, rng);
  REQUIRE(!path.jump_times.empty());
  for (double s : path.jump_times) {
    const double before = std::nextafter(s, 0.0);
    CHECK(eval_path(path, s) - eval_path(path, before) == 1);
  }
}

TEST_CASE("terminal count moments at rate 3/4 on [0, 10]") {
  RngStream rng(7, 0);
  const int n = 10'000;
  double s = 0.0, ss = 0.0;
  for (int k = 0; k < n; ++k) {
    const PoissonPath path = sample_poisson_path(0.75, 10.0, rng);
    const double c = (double)eval_path(path, 10.0);
    s += c;
    ss += c * c;
  }
  const double mean = s / n;
  const double var = ss / n - mean * mean;
  // mean and variance are both a*T = 7.5; se of the mean is 0.027
  CHECK(std::abs(mean - 7.5) < 3.0 * std::sqrt(7.5 / (double)n));
  CHECK(var > 7.0);
  CHECK(var < 8.0);
}

TEST_CASE("counts on disjoint intervals are uncorrelated") {
  RngStream rng(8, 0);
  const int n = 10'000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    const PoissonPath path = sample_poisson_path(0.75, 10.0, rng);
    const double x = (double)(eval_path(path, 1.0) - eval_path(path, 0.0));
    const double y = (double)(eval_path(path, 3.0) - eval_path(path, 2.0));
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double cx = sxx / n - (sx / n) * (sx / n);
  const double cy = syy / n - (sy / n) * (sy / n);
  const double cxy = sxy / n - (sx / n) * (sy / n);
  const double corr = cxy / std::sqrt(cx * cy);
  CHECK(std::abs(corr) < 4.0 / std::sqrt((double)n));
}

TEST_CASE("chi-square goodness of fit for the count at time 1") {
  RngStream rng(9, 0);
  const int n = 10'000;
  // Poisson(0.75) cell probabilities for counts {0, 1, 2, >=3}
  const double a = 0.75;
  const double p0 = std::exp(-a);
  const double p1 = p0 * a;
  const double p2 = p1 * a / 2.0;
  const double probs[4] = {p0, p1, p2, 1.0 - p0 - p1 - p2};
  int counts[4] = {0, 0, 0, 0};
  for (int k = 0; k < n; ++k) {
    const PoissonPath path = sample_poisson_path(a, 1.0, rng);
    const int c = eval_path(path, 1.0);
    ++counts[c >= 3 ? 3 : c];
  }
  double chi2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double expect = n * probs[i];
    chi2 += (counts[i] - expect) * (counts[i] - expect) / expect;
  }
  // 1% critical value of chi-square with 3 degrees of freedom
  CHECK(chi2 < 11.344866730144373);
}
