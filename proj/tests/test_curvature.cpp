#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "rectiscope/curvature.hpp"
#include "rectiscope/error.hpp"
#include "rectiscope/generators.hpp"
#include "support.hpp"

using namespace rectiscope;

using testing_support::reference_curv_n1;

TEST_SUITE("curvature") {
  TEST_CASE("exhaustive curvature equals the double-loop reference bit for bit") {
    auto mu = testing_support::unit_circle(40);
    for (double alpha : {0.0, 0.5}) {
      for (Index c : {0, 7, 23}) {
        for (double r : {0.5, 1.0, 2.5}) {
          const Vector x = mu.point(c);
          const auto e = curv_exhaustive(mu, x, r, 2.0, alpha);
          CHECK(e.value == reference_curv_n1(mu, x, r, 2.0, alpha));
        }
      }
    }
  }

  TEST_CASE("exhaustive tuple count and thread independence") {
    auto mu = testing_support::unit_circle(30);
    const auto a = curv_exhaustive(mu, mu.point(0), 1.0, 2.0, 0.0);
    CHECK(a.tuples_evaluated == std::pow(mu.ball_indices(mu.point(0), 1.0).size(), 2));
    setenv("RECTISCOPE_THREADS", "3", 1);
    const auto b = curv_exhaustive(mu, mu.point(0), 1.0, 2.0, 0.0);
    unsetenv("RECTISCOPE_THREADS");
    CHECK(a.value == b.value);
  }

  TEST_CASE("flat supports have zero curvature") {
    auto line = testing_support::segment(40, 0.05, 3);
    for (Index i = 0; i < line.size(); i += 9) {
      CHECK(curv_exhaustive(line, line.point(i), 1.0, 2.0, 0.5).value == 0.0);
      CHECK(curv_monte_carlo(line, line.point(i), 1.0, 2.0, 0.5, 2000, 3).value == 0.0);
    }
    GeneratorSpec plane;
    plane.n = 2;
    plane.m = 3;
    plane.count = 30;
    auto mu = generate(plane);
    CHECK(curv_exhaustive(mu, mu.point(0), 0.6, 2.0, 0.0).value == 0.0);
  }

  TEST_CASE("dilation scales by lambda^(-p alpha)") {
    std::mt19937_64 gen(14);
    auto mu = testing_support::random_cloud(gen, 25, 2, 1);
    const double lambda = 3.0;
    const DiscreteMeasure big(mu.points() * lambda, mu.weights() * lambda, 1);
    for (double alpha : {0.0, 0.5, 0.9}) {
      const double p = 2.0;
      const double small = curv_exhaustive(mu, mu.point(0), 0.8, p, alpha).value;
      const double large = curv_exhaustive(big, big.point(0), 0.8 * lambda, p, alpha).value;
      CHECK(large == doctest::Approx(small * std::pow(lambda, -p * alpha)).epsilon(1e-12));
    }
  }

  TEST_CASE("two-dimensional curvature on a corner tetrahedron") {
    Matrix pts(3, 4);
    pts << 0, 1, 0, 0,
           0, 0, 1, 0,
           0, 0, 0, 1;
    DiscreteMeasure mu(pts, Vector::Ones(4), 2);
    const Vector x = Vector::Zero(3);
    // Only the 3! orderings of (e1, e2, e3) are non-degenerate: h_min = 1/sqrt(3), diam = sqrt(2).
    const auto e = curv_exhaustive(mu, x, 1.0, 2.0, 0.0);
    const double expect = 6.0 * (1.0 / 3.0) / std::pow(std::sqrt(2.0), 2 + 6);
    CHECK(e.value == doctest::Approx(expect).epsilon(1e-14));
    CHECK(e.tuples_evaluated == 64);
  }

  TEST_CASE("monte carlo is unbiased within its error bar") {
    auto mu = testing_support::unit_circle(40);
    const Vector x = mu.point(3);
    const double exact = curv_exhaustive(mu, x, 1.2, 2.0, 0.5).value;
    int inside = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const auto e = curv_monte_carlo(mu, x, 1.2, 2.0, 0.5, 20000, seed);
      CHECK(e.std_error > 0.0);
      inside += std::abs(e.value - exact) <= 3 * e.std_error;
    }
    CHECK(inside >= 36);
    const auto u = curv_monte_carlo(mu, x, 1.2, 2.0, 0.5, 50000, 1, SamplingStrategy::kUniform);
    CHECK(std::abs(u.value - exact) <= 4 * u.std_error);
  }

  TEST_CASE("monte carlo is reproducible across worker counts") {
    auto mu = testing_support::unit_circle(64);
    setenv("RECTISCOPE_THREADS", "1", 1);
    const auto a = curv_monte_carlo(mu, mu.point(0), 1.0, 2.0, 0.5, 30000, 9);
    setenv("RECTISCOPE_THREADS", "4", 1);
    const auto b = curv_monte_carlo(mu, mu.point(0), 1.0, 2.0, 0.5, 30000, 9);
    unsetenv("RECTISCOPE_THREADS");
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
  }

  TEST_CASE("budget and dispatch") {
    auto mu = testing_support::unit_circle(40);
    CHECK_THROWS_AS(curv_exhaustive(mu, mu.point(0), 2.0, 2.0, 0.0, 100), BudgetError);
    CurvOptions opt;
    opt.budget = 100;
    opt.samples = 1000;
    CHECK(curv_estimate(mu, mu.point(0), 2.0, 2.0, 0.0, opt).method == CurvMethod::kMonteCarlo);
    opt.budget = 1'000'000;
    CHECK(curv_estimate(mu, mu.point(0), 2.0, 2.0, 0.0, opt).method == CurvMethod::kExhaustive);
    CHECK_THROWS_AS(curv_exhaustive(mu, mu.point(0), -1.0, 2.0, 0.0), InputError);
  }

  TEST_CASE("curvature exponent") {
    CHECK(curvature_exponent(1, 2.0, 0.5) == 5.0);
    CHECK(curvature_exponent(2, 2.0, 0.0) == 8.0);
  }
}
