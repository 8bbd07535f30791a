#include <doctest.h>

#include <cmath>
#include <random>

#include "rectiscope/error.hpp"
#include "rectiscope/verify.hpp"
#include "support.hpp"

using namespace rectiscope;

namespace {

// Sum-form Hoelder bound evaluated directly.
std::pair<double, double> holder_sides(const ScaleProfile& prof, double p, double alpha) {
  const double delta = std::log(1.0 / prof.ratio);
  double lhs = 0, a = 0, b = 0;
  for (std::size_t j = 0; j < prof.radii.size(); ++j) {
    const double r = prof.radii[j], v = prof.values[j];
    lhs += v * v * delta;
    a += std::pow(v / std::pow(r, alpha), p) * delta;
    b += std::pow(r, 2 * p * alpha / (p - 2)) * delta;
  }
  return {lhs, std::pow(a, 2 / p) * std::pow(b, (p - 2) / p)};
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("case bookkeeping") {
    const auto c = make_case("x", 1.0, 2.0, 3.0);
    CHECK(c.pass);
    CHECK(c.margin == 2.0);
    CHECK(make_case("zero", 0.0, 0.0, 1.0).margin == std::numeric_limits<double>::infinity());
    CHECK_FALSE(make_case("bad", 2.0, 1.0, 1.0).pass);
    InequalityReport r;
    r.add(skipped_case("s", "no data"));
    CHECK_FALSE(r.pass());
    r.add(make_case("a", 1.0, 4.0, 1.0));
    r.add(make_case("b", 1.0, 1.5, 1.0));
    CHECK(r.pass());
    CHECK(r.worst == std::size_t{2});
    r.add(make_case("c", 3.0, 1.0, 1.0));
    CHECK_FALSE(r.pass());
    CHECK(r.failed == 1);
    CHECK(r.skipped == 1);
  }

  TEST_CASE("volume identity on a right triangle and random simplices") {
    const auto rep = check_volume_identity(200, 4, 5, 1);
    CHECK(rep.pass());
    CHECK(rep.cases.size() == 4);
    for (const auto& c : rep.cases) CHECK(c.lhs < 1e-9);
    CHECK_THROWS_AS(check_volume_identity(10, 5, 5, 1), InputError);
  }

  TEST_CASE("hoelder sum form against a direct evaluation") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 300; ++t) {
      ScaleProfile prof;
      prof.ratio = 0.5;
      prof.alpha = 0.5;
      const int count = 3 + t % 10;
      for (int j = 0; j < count; ++j) {
        prof.radii.push_back(std::ldexp(1.0, -j));
        prof.values.push_back(t % 7 == 0 ? 0.0 : u(gen));
      }
      const double p = t % 2 ? 3.0 : 4.0;
      const double alpha = t % 3 ? 0.3 : 0.5;
      const auto c = holder_sum_check(prof, p, alpha);
      const auto [lhs, rhs] = holder_sides(prof, p, alpha);
      CHECK(c.pass);
      CHECK(c.lhs == doctest::Approx(lhs).epsilon(1e-12));
      CHECK(c.rhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    ScaleProfile prof{{1.0, 0.5}, {0.1, 0.1}, 0.0, 0.5};
    CHECK_THROWS_AS(holder_sum_check(prof, 2.0, 0.5), InputError);
  }

  TEST_CASE("beta ordering on random clouds") {
    std::mt19937_64 gen(15);
    for (int t = 0; t < 4; ++t) {
      auto mu = testing_support::random_cloud(gen, 20, 2 + t % 2, 1);
      std::vector<Index> centers = {0, 5, 11};
      const auto rep = check_beta_ordering(mu, centers, {0.5, 1.0, 2.0}, {1.0, 1.5}, {3.0, 4.0});
      CHECK(rep.failed == 0);
      CHECK(rep.passed > 0);
    }
  }

  TEST_CASE("beta against curvature on the circle") {
    auto mu = testing_support::unit_circle(120);
    SecantConfig cfg;
    ChainOptions opt;
    opt.audit_samples = 200;
    const auto rep = check_beta_vs_curv(mu, mu.point(0), cfg, {1.0, 0.5, 0.25, 0.125}, opt);
    CHECK(rep.pass());
    CHECK(rep.failed == 0);
    for (const auto& c : rep.cases) CHECK(c.lhs > 0.0);
  }

  TEST_CASE("jones against curvature on the circle") {
    auto mu = testing_support::unit_circle(120);
    SecantConfig cfg;
    JonesChainOptions opt;
    opt.scale_count = 4;
    for (double alpha : {0.0, 0.5}) {
      const auto rep = check_jones_vs_curv(mu, mu.point(3), alpha, cfg, opt);
      CHECK(rep.pass());
      CHECK(rep.cases.back().label == "sum over scales");
    }
  }

  TEST_CASE("flat measures give trivial chain cases") {
    auto seg = testing_support::segment(200, 0.01);
    SecantConfig cfg;
    const auto rep = check_beta_vs_curv(seg, seg.point(100), cfg, {0.5, 0.25}, {});
    CHECK(rep.pass());
    for (const auto& c : rep.cases) CHECK(c.lhs == 0.0);
  }

  TEST_CASE("too little mass leaves a vacuous report") {
    auto mu = testing_support::unit_circle(50);
    SecantConfig cfg;
    cfg.lambda = 50.0;
    cfg.c0 = 50.0;
    const auto rep = check_beta_vs_curv(mu, mu.point(0), cfg, {1.0, 0.5}, {});
    CHECK(rep.skipped == 2);
    CHECK_FALSE(rep.pass());
  }

  TEST_CASE("hoelder chain on a real profile") {
    auto mu = testing_support::unit_circle(256);
    const auto rep = check_holder_chain(mu, mu.point(0), 3.0, 0.5, {1.0, 0.5, 8});
    CHECK(rep.pass());
  }
}
