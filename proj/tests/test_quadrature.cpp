#include <doctest.h>

#include <cmath>
#include <vector>

#include "itoquad/quadrature.hpp"
#include "itoquad/rng.hpp"

using namespace itoquad;

TEST_CASE("shifted grid construction") {
  SUBCASE("interior shift") {
    const ShiftedGrid g = build_shifted_grid(1.0, 4, 0.5);
    const std::vector<double> expect{0.0, 0.125, 0.375, 0.625, 0.875, 1.0};
    REQUIRE(g.nodes.size() == expect.size());
    for (std::size_t k = 0; k < expect.size(); ++k)
      CHECK(g.nodes[k] == doctest::Approx(expect[k]).epsilon(1e-15));
    for (int j = 2; j <= 4; ++j)
      CHECK(g.eval_point(j) - g.eval_point(j - 1) == doctest::Approx(0.25).epsilon(1e-14));
  }

  SUBCASE("boundary shifts deduplicate") {
    const ShiftedGrid g0 = build_shifted_grid(1.0, 4, 0.0);
    CHECK(g0.nodes == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(g0.eval_point(1) == 0.0);
    CHECK(g0.eval_point(4) == 0.75);

    const ShiftedGrid g1 = build_shifted_grid(1.0, 4, 1.0);
    CHECK(g1.nodes == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(g1.eval_point(1) == 0.25);
    CHECK(g1.eval_point(4) == 1.0);
    CHECK(g1.node_index(5) == g1.node_index(4));  // zero-length final increment
  }

  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(build_shifted_grid(1.0, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_shifted_grid(0.0, 4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_shifted_grid(1.0, 4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(build_shifted_grid(1.0, 4, -0.1), std::invalid_argument);
  }

  SUBCASE("invariants over random draws") {
    RngStream rng(2000, 0);
    for (int rep = 0; rep < 10'000; ++rep) {
      const int N = 1 + (int)(rng.next_u64() % 64);
      const double shift = rng.uniform();
      const double T = 0.5 + rng.uniform() * 9.5;
      const ShiftedGrid g = build_shifted_grid(T, N, shift);
      CHECK(g.nodes.front() == 0.0);
      CHECK(g.nodes.back() == T);
      for (std::size_t k = 1; k < g.nodes.size(); ++k) {
        const double gap = g.nodes[k] - g.nodes[k - 1];
        CHECK(gap > 0.0);
        CHECK(gap <= g.h * (1.0 + 1e-12));
      }
      // interior gaps are exactly h up to accumulated rounding
      for (int j = 2; j <= N; ++j) {
        const double gap = g.eval_point(j) - g.eval_point(j - 1);
        if (g.node_index(j) > g.node_index(j - 1))
          CHECK(std::abs(gap - g.h) <= 1e-10 * g.h);
      }
      const std::size_t expected =
          (std::size_t)N + 2 - (shift == 0.0 ? 1 : 0) - (shift == 1.0 ? 1 : 0);
      CHECK(g.nodes.size() == expected);
    }
  }
}

TEST_CASE("uniform grid points") {
  const UniformGrid g = build_uniform_grid(1.0, 8);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(8) == 1.0);
  CHECK(g.midpoint(1) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(g.theta_point(1, 0.0) == 0.0);
  CHECK(g.theta_hat_point(1, 0.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.theta_point(3, 0.5) == doctest::Approx(g.theta_hat_point(3, 0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(build_uniform_grid(1.0, 0), std::invalid_argument);
}

TEST_CASE("srm kernel") {
  SUBCASE("single interval expansion") {
    const ShiftedGrid g = build_shifted_grid(1.0, 1, 0.5);
    // nodes {0, 0.5, 1}; value = g(0.5) * (W(1) - W(0.5))
    const std::vector<double> evals{2.0};
    const std::vector<double> w{0.0, 0.3, 1.1};
    const QuadratureResult r = srm_quadrature(evals, w, g);
    CHECK(r.value == doctest::Approx(2.0 * (1.1 - 0.3)).epsilon(1e-15));
  }

  SUBCASE("constant evaluations telescope to W(T) - W(theta_1)") {
    RngStream rng(21, 0);
    const ShiftedGrid g = build_shifted_grid(1.0, 8, 0.3);
    std::vector<double> w(g.nodes.size());
    for (std::size_t k = 1; k < w.size(); ++k) w[k] = w[k - 1] + rng.standard_normal();
    const std::vector<double> ones((std::size_t)8, 1.0);
    const QuadratureResult r = srm_quadrature(ones, w, g);
    // the rule deliberately omits [0, theta_1], so this is not W(T)
    CHECK(r.value == doctest::Approx(w.back() - w[g.node_index(1)]).epsilon(1e-12));
  }

  SUBCASE("zero evaluations give zero") {
    const ShiftedGrid g = build_shifted_grid(1.0, 4, 0.7);
    const std::vector<double> zeros(4, 0.0);
    const std::vector<double> w(g.nodes.size(), 0.5);
    CHECK(srm_quadrature(zeros, w, g).value == 0.0);
  }

  SUBCASE("length mismatches are rejected") {
    const ShiftedGrid g = build_shifted_grid(1.0, 4, 0.7);
    const std::vector<double> w(g.nodes.size(), 0.0);
    CHECK_THROWS_AS(srm_quadrature(std::vector<double>(3, 0.0), w, g), std::invalid_argument);
    CHECK_THROWS_AS(srm_quadrature(std::vector<double>(4, 0.0),
                                   std::vector<double>(2, 0.0), g),
                    std::invalid_argument);
  }

  SUBCASE("linearity in the evaluations") {
    RngStream rng(22, 0);
    const ShiftedGrid g = build_shifted_grid(1.0, 16, 0.42);
    std::vector<double> w(g.nodes.size());
    for (std::size_t k = 1; k < w.size(); ++k) w[k] = w[k - 1] + rng.standard_normal();
    std::vector<double> e1(16), e2(16), combo(16);
    for (int i = 0; i < 16; ++i) {
      e1[(std::size_t)i] = rng.uniform();
      e2[(std::size_t)i] = rng.uniform();
      combo[(std::size_t)i] = 2.0 * e1[(std::size_t)i] - 3.0 * e2[(std::size_t)i];
    }
    const double lhs = srm_quadrature(combo, w, g).value;
    const double rhs =
        2.0 * srm_quadrature(e1, w, g).value - 3.0 * srm_quadrature(e2, w, g).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("trap kernel") {
  SUBCASE("constant integrand gives c * (W(T) - W(0))") {
    const AffineIntegrand g(3.0, 0.0);
    const UniformGrid grid = build_uniform_grid(1.0, 8);
    RngStream rng(23, 0);
    std::vector<JointIncrement> incs(8);
    double wT = 0.0;
    for (auto& x : incs) {
      x = sample_joint_increment(g, 0.0, 0.125, rng);  // only x1/x2 are consumed
      wT += x.x1;
    }
    const QuadratureResult r = trap_quadrature(g, grid, 0.0, incs);
    CHECK(r.value == doctest::Approx(3.0 * wT).epsilon(1e-13));
    CHECK(r.skipped_terms == 0);
  }

  SUBCASE("affine integrands are reproduced exactly") {
    RngStream rng(24, 0);
    for (int rep = 0; rep < 100; ++rep) {
      const AffineIntegrand g(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
      const int N = 1 + (int)(rng.next_u64() % 16);
      const TrapSample s = trap_integrate(g, 1.0, N, 0.0, rng);
      CHECK(std::abs(s.approx.value - s.exact) <= 1e-10 * (1.0 + std::abs(s.exact)));
    }
  }

  SUBCASE("theta and 1 - theta give identical output") {
    const SineIntegrand g(42.0);
    const UniformGrid grid = build_uniform_grid(1.0, 8);
    RngStream rng(25, 0);
    std::vector<JointIncrement> incs(8);
    for (int j = 1; j <= 8; ++j)
      incs[(std::size_t)j - 1] = sample_joint_increment(g, grid.node(j - 1), grid.node(j), rng);
    const double a = trap_quadrature(g, grid, 0.3, incs).value;
    const double b = trap_quadrature(g, grid, 0.7, incs).value;
    CHECK(a == b);
  }

  SUBCASE("theta = 0 uses only the grid nodes") {
    const SineIntegrand g(5.0);
    const UniformGrid grid = build_uniform_grid(1.0, 4);
    std::vector<JointIncrement> incs(4);
    RngStream rng(26, 0);
    for (int j = 1; j <= 4; ++j)
      incs[(std::size_t)j - 1] = sample_joint_increment(g, grid.node(j - 1), grid.node(j), rng);
    double manual = 0.0;
    for (int j = 1; j <= 4; ++j) {
      const double gl = g.eval(grid.node(j - 1));
      const double gr = g.eval(grid.node(j));
      manual += 0.5 * (gl + gr) * incs[(std::size_t)j - 1].x1 +
                (gr - gl) / grid.h * incs[(std::size_t)j - 1].x2;
    }
    CHECK(trap_quadrature(g, grid, 0.0, incs).value ==
          doctest::Approx(manual).epsilon(1e-15));
  }

  SUBCASE("singularity skip rule") {
    const PowerIntegrand g(-0.3);
    RngStream rng(27, 0);
    const TrapSample s = trap_integrate(g, 1.0, 8, 0.0, rng, /*skip_singular=*/true);
    CHECK(s.approx.skipped_terms == 1);
    CHECK(std::isfinite(s.approx.value));

    RngStream rng2(27, 0);
    CHECK_THROWS_AS(trap_integrate(g, 1.0, 8, 0.0, rng2, /*skip_singular=*/false),
                    SingularEvaluation);

    // the positive power is evaluatable everywhere, nothing gets skipped
    RngStream rng3(27, 1);
    const TrapSample sp = trap_integrate(PowerIntegrand(0.5), 1.0, 8, 0.0, rng3);
    CHECK(sp.approx.skipped_terms == 0);
  }

  SUBCASE("argument validation") {
    const SineIntegrand g(1.0);
    const UniformGrid grid = build_uniform_grid(1.0, 4);
    CHECK_THROWS_AS(trap_quadrature(g, grid, 0.0, std::vector<JointIncrement>(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(trap_quadrature(g, grid, 1.5, std::vector<JointIncrement>(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("srm_integrate couples rule and exact integral") {
  SUBCASE("zero integrand has zero error") {
    const AffineIntegrand z(0.0, 0.0);
    RngStream rng(30, 0);
    const SrmSample s = srm_integrate(z, 1.0, 8, rng);
    CHECK(s.approx.value == 0.0);
    CHECK(s.exact == 0.0);
  }

  SUBCASE("deterministic given the stream") {
    const SineIntegrand g(42.0);
    RngStream a(30, 1), b(30, 1);
    const SrmSample sa = srm_integrate(g, 1.0, 16, a);
    const SrmSample sb = srm_integrate(g, 1.0, 16, b);
    CHECK(sa.approx.value == sb.approx.value);
    CHECK(sa.exact == sb.exact);
    CHECK(sa.approx.shift_or_theta == sb.approx.shift_or_theta);
  }

  SUBCASE("exact reference has the Ito isometry variance") {
    // Var(int_0^1 g dW) = int_0^1 g^2 dt, independent of the partition.
    const SineIntegrand g(42.0);
    const double target = g.moment2(0.0, 1.0);
    RngStream rng(31, 0);
    const int n = 4000;
    double s = 0.0, ss = 0.0;
    for (int k = 0; k < n; ++k) {
      const SrmSample smp = srm_integrate(g, 1.0, 8, rng);
      s += smp.exact;
      ss += smp.exact * smp.exact;
    }
    const double var = ss / n - (s / n) * (s / n);
    CHECK(std::abs(var - target) < 5.0 * target * std::sqrt(2.0 / (double)n));
  }

  SUBCASE("singular integrand is evaluatable on the shifted grid") {
    const PowerIntegrand g(-0.3);
    RngStream rng(32, 0);
    for (int k = 0; k < 200; ++k) {
      const SrmSample s = srm_integrate(g, 1.0, 8, rng);
      CHECK(std::isfinite(s.approx.value));
      CHECK(std::isfinite(s.exact));
    }
  }
}

TEST_CASE("coupled coarse/fine pair") {
  SUBCASE("fine grid refines by the requested factor and shares the shift") {
    RngStream rng(33, 0);
    const auto fn = [](double t) { return std::sin(3.0 * t); };
    const CoupledPair pair = srm_coupled(fn, 1.0, 8, 16, rng);
    CHECK(pair.coarse.N == 8);
    CHECK(pair.fine.N == 128);
    CHECK(pair.fine.h == doctest::Approx(pair.coarse.h / 16.0).epsilon(1e-15));
    CHECK(pair.coarse.shift_or_theta == pair.fine.shift_or_theta);
  }

  SUBCASE("deterministic and sane for a step function") {
    const auto fn = [](double t) { return t >= 0.4 ? 2.0 : 0.0; };
    RngStream a(34, 9), b(34, 9);
    const CoupledPair pa = srm_coupled(fn, 1.0, 8, 16, a);
    const CoupledPair pb = srm_coupled(fn, 1.0, 8, 16, b);
    CHECK(pa.coarse.value == pb.coarse.value);
    CHECK(pa.fine.value == pb.fine.value);
    CHECK(std::isfinite(pa.coarse.value));
  }

  SUBCASE("factor below 2 is rejected") {
    RngStream rng(35, 0);
    CHECK_THROWS_AS(srm_coupled([](double) { return 1.0; }, 1.0, 8, 1, rng),
                    std::invalid_argument);
  }
}
