#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rectiscope/error.hpp"
#include "rectiscope/generators.hpp"

using namespace rectiscope;

TEST_SUITE("generators") {
  TEST_CASE("halton radical inverses") {
    CHECK(halton(1, 2)(0) == 0.5);
    CHECK(halton(2, 2)(0) == 0.25);
    CHECK(halton(3, 2)(0) == 0.75);
    CHECK(halton(1, 2)(1) == doctest::Approx(1.0 / 3));
    CHECK(halton(5, 2)(1) == doctest::Approx(2.0 / 3 + 1.0 / 9));
  }

  TEST_CASE("plane fixture lies in the coordinate plane") {
    GeneratorSpec s;
    s.n = 2;
    s.m = 4;
    s.count = 500;
    const auto mu = generate(s);
    CHECK(mu.size() == 500);
    CHECK(mu.intrinsic_dim() == 2);
    CHECK((mu.points().bottomRows(2).array() == 0.0).all());
    CHECK((mu.points().topRows(2).array() >= 0.0).all());
    CHECK((mu.points().topRows(2).array() <= 1.0).all());
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("circle fixture") {
    GeneratorSpec s;
    s.kind = GeneratorKind::kCircle;
    s.m = 3;
    s.count = 64;
    const auto mu = generate(s);
    for (Index i = 0; i < mu.size(); ++i) {
      CHECK(mu.point(i).norm() == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(mu.point(i)(2) == 0.0);
    }
    CHECK(mu.total_mass() == doctest::Approx(2 * std::numbers::pi).epsilon(1e-14));
  }

  TEST_CASE("cantor fixture") {
    GeneratorSpec s;
    s.kind = GeneratorKind::kCantor4;
    s.level = 3;
    const auto mu = generate(s);
    CHECK(mu.size() == 64);
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mu.weight(7) == 1.0 / 64);
    // Level-3 cells have side 4^-3; the lower-left one is centred at half a side.
    bool found = false;
    for (Index i = 0; i < mu.size(); ++i) {
      found |= mu.point(i)(0) == 0.5 / 64 && mu.point(i)(1) == 0.5 / 64;
      CHECK(mu.point(i)(0) > 0.0);
      CHECK(mu.point(i)(0) < 1.0);
    }
    CHECK(found);
    // Sibling cells sit 0.75 * 4^-(L-1) apart.
    CHECK(mu.min_pairwise_distance() == doctest::Approx(0.75 / 16).epsilon(1e-14));
  }

  TEST_CASE("weierstrass profile") {
    double direct = 0;
    for (int j = 1; j <= 12; ++j) direct += std::pow(2.0, -j * 1.5) * std::cos(std::ldexp(0.7, j));
    CHECK(weierstrass(0.7, 0.5) == doctest::Approx(direct).epsilon(1e-14));
    const double h = 1e-6;
    CHECK(weierstrass_derivative(0.7, 0.5) ==
          doctest::Approx((weierstrass(0.7 + h, 0.5) - weierstrass(0.7 - h, 0.5)) / (2 * h)).epsilon(1e-6));
  }

  TEST_CASE("holder graph is a graph over the sample domain") {
    GeneratorSpec s;
    s.kind = GeneratorKind::kHolderGraph;
    s.alpha = 0.3;
    s.count = 200;
    const auto mu = generate(s);
    for (Index i = 0; i < mu.size(); ++i) {
      CHECK(mu.point(i)(1) == doctest::Approx(weierstrass(mu.point(i)(0), 0.3)).epsilon(1e-14));
      CHECK(mu.point(i)(0) >= 0.0);
      CHECK(mu.point(i)(0) <= 2 * std::numbers::pi);
    }
    s.weights = WeightScheme::kUniform;
    CHECK(generate(s).weight(0) == 1.0 / 200);
  }

  TEST_CASE("seeds are deterministic") {
    GeneratorSpec s;
    s.kind = GeneratorKind::kPerturbedPlane;
    s.count = 100;
    CHECK(generate(s).content_hash() == generate(s).content_hash());
    auto t = s;
    t.seed = 8;
    CHECK(generate(s).content_hash() != generate(t).content_hash());
    const auto mu = generate(s);
    CHECK((mu.points().row(1).array().abs() <= s.noise).all());
  }

  TEST_CASE("invalid specs") {
    GeneratorSpec s;
    s.kind = GeneratorKind::kHolderGraph;
    s.alpha = 1.0;
    CHECK_THROWS_AS(generate(s), InputError);
    s = {};
    s.kind = GeneratorKind::kCircle;
    s.n = 2;
    s.m = 3;
    CHECK_THROWS_AS(generate(s), InputError);
    s = {};
    s.kind = GeneratorKind::kLipschitzGraph;
    s.n = 2;
    s.m = 2;
    CHECK_THROWS_AS(generate(s), InputError);
    CHECK_THROWS_AS(parse_generator_kind("sphere"), InputError);
    CHECK(parse_generator_kind(to_string(GeneratorKind::kCantor4)) == GeneratorKind::kCantor4);
  }
}
