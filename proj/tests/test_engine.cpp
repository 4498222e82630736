#include <doctest.h>

#include <cmath>

#include "nsdyn/engine.hpp"
#include "nsdyn/errors.hpp"
#include "test_support.hpp"

using namespace nsdyn;

TEST_CASE("step examples") {
  Rng rng(1);
  SUBCASE("gradient step on quad, every policy") {
    const CatalogFunction quad(FunctionId::quad, 2);
    for (const auto& policy : {SelectionPolicy::minimal_norm(), SelectionPolicy::random_extreme(),
                               SelectionPolicy::fixed(3)}) {
      const StepResult r = step(quad, {1.0, 0.0}, 0.1, policy, rng);
      CHECK(r.next == Vector{0.9, 0.0});
      CHECK(r.subgradient == Vector{1.0, 0.0});
      CHECK_FALSE(r.diverged);
    }
  }
  SUBCASE("cross follows its displayed update") {
    const StepResult r = step(CatalogFunction(FunctionId::cross), {1.0, 0.1}, 0.1, {}, rng);
    const double x1 = 1.0 - 0.1 * 1.5 * std::pow(0.1, 1.5);
    const double x2 = 0.1 - 0.1 * 1.5 * std::sqrt(0.1);
    CHECK(r.next[0] == doctest::Approx(x1).epsilon(1e-15));
    CHECK(r.next[1] == doctest::Approx(x2).epsilon(1e-15));
    CHECK(r.next[0] == doctest::Approx(0.99525658).epsilon(1e-8));
    CHECK(r.next[1] == doctest::Approx(0.05256583).epsilon(1e-7));
  }
  SUBCASE("abs_sum kink is a fixed point under minimal norm") {
    const CatalogFunction abs1(FunctionId::abs_sum, 1);
    const StepResult r = step(abs1, {0.0}, 0.1, SelectionPolicy::minimal_norm(), rng);
    CHECK(r.next == Vector{0.0});
    CHECK(r.subgradient == Vector{0.0});
    CHECK(step(abs1, {0.0}, 0.1, SelectionPolicy::fixed(0), rng).next == Vector{0.1});
    CHECK(step(abs1, {0.0}, 0.1, SelectionPolicy::fixed(1), rng).next == Vector{-0.1});
    const double moved = step(abs1, {0.0}, 0.1, SelectionPolicy::random_extreme(), rng).next[0];
    CHECK(std::fabs(moved) == 0.1);
  }
  SUBCASE("only random_extreme draws from the generator") {
    const CatalogFunction abs1(FunctionId::abs_sum, 1);
    Rng r2(5);
    step(abs1, {0.0}, 0.1, SelectionPolicy::minimal_norm(), r2);
    step(abs1, {0.0}, 0.1, SelectionPolicy::fixed(1), r2);
    CHECK(r2.counter() == 0);
    step(abs1, {0.3}, 0.1, SelectionPolicy::random_extreme(), r2);
    CHECK(r2.counter() == 1);
  }
  SUBCASE("invalid step size") {
    CHECK_THROWS_AS(step(CatalogFunction(FunctionId::quad, 1), {1.0}, 0.0, {}, rng),
                    InvalidArgument);
  }
}

TEST_CASE("run examples") {
  SUBCASE("quad contracts geometrically") {
    const Trajectory t = run(CatalogFunction(FunctionId::quad, 1), {1.0}, 0.1, 10);
    REQUIRE(t.points.size() == 11);
    for (std::size_t k = 0; k <= 10; ++k)
      CHECK(t.points[k][0] == doctest::Approx(std::pow(0.9, double(k))).epsilon(1e-12));
    CHECK(t.points[10][0] == doctest::Approx(0.3486784401).epsilon(1e-10));
  }
  SUBCASE("abs_sum oscillates across the kink") {
    const Trajectory t = run(CatalogFunction(FunctionId::abs_sum, 1), {0.05}, 0.1, 4);
    const double expected[] = {0.05, -0.05, 0.05, -0.05, 0.05};
    for (std::size_t k = 0; k < 5; ++k)
      CHECK(t.points[k][0] == doctest::Approx(expected[k]).epsilon(1e-14));
  }
  SUBCASE("cross critical point is constant") {
    const Trajectory t = run(CatalogFunction(FunctionId::cross), {1.0, 0.0}, 0.3, 25);
    for (const Vector& x : t.points) CHECK(x == Vector{1.0, 0.0});
  }
  SUBCASE("divergence is recorded, not thrown") {
    const Trajectory t = run(CatalogFunction(FunctionId::quad, 1), {1.0}, 1e60, 10);
    REQUIRE(t.diverged_at);
    CHECK(*t.diverged_at == 2);
    CHECK(t.points.size() == 3);
  }
  SUBCASE("stop ball halts at the first outside point") {
    const CatalogFunction neg(FunctionId::neg_norm, 2);
    const Trajectory t = run(neg, {0.01, 0.0}, 0.1, 100, {}, 0, Ball{{0.0, 0.0}, 0.25});
    CHECK(t.points.size() == 4);  // 0.01, 0.11, 0.21, 0.31
    CHECK(first_exit(t, {0.0, 0.0}, 0.25) == std::optional<std::size_t>(3));
  }
  SUBCASE("zero steps keeps the initial point") {
    const Trajectory t = run(CatalogFunction(FunctionId::quad, 1), {1.0}, 0.1, 0);
    CHECK(t.points.size() == 1);
    CHECK(t.steps() == 0);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(run(CatalogFunction(FunctionId::quad, 2), {1.0}, 0.1, 1), DimensionMismatch);
    CHECK_THROWS_AS(run(CatalogFunction(FunctionId::quad, 1), {NAN}, 0.1, 1), NonFiniteInput);
  }
}

TEST_CASE("interpolate examples") {
  const Trajectory quad_t = run(CatalogFunction(FunctionId::quad, 1), {1.0}, 0.1, 10);
  const InterpolatedPath quad_path(quad_t, 1.0);
  CHECK(quad_path.at(0.05)[0] == doctest::Approx(0.95).epsilon(1e-14));
  for (std::size_t k = 0; k <= 10; ++k) CHECK(quad_path.at(0.1 * double(k)) == quad_t.points[k]);
  CHECK_THROWS_AS(quad_path.at(1.5), OutOfHorizon);
  CHECK_THROWS_AS(quad_path.at(-0.01), OutOfHorizon);

  const Trajectory abs_t = run(CatalogFunction(FunctionId::abs_sum, 1), {0.05}, 0.1, 4);
  const InterpolatedPath abs_path(abs_t, 10.0);
  CHECK(abs_path.end_time() == doctest::Approx(0.4));
  CHECK(std::fabs(abs_path.at(0.15)[0]) < 1e-15);
  CHECK(interpolate(abs_path, 0.4) == abs_t.points[4]);
}

TEST_CASE("first_exit examples") {
  const Trajectory quad_t = run(CatalogFunction(FunctionId::quad, 1), {1.0}, 0.1, 10);
  CHECK_FALSE(first_exit(quad_t, {0.0}, 2.0));
  CHECK(first_exit(quad_t, {0.0}, 0.5) == std::optional<std::size_t>(0));
  const Trajectory abs_t = run(CatalogFunction(FunctionId::abs_sum, 1), {0.05}, 0.1, 4);
  CHECK(first_exit(abs_t, {0.2}, 0.1) == std::optional<std::size_t>(0));
  CHECK_FALSE(first_exit(abs_t, {0.0}, 0.1));
  CHECK_THROWS_AS(first_exit(abs_t, {0.0}, 0.0), InvalidArgument);
}

TEST_CASE("property: exact linear recursion on quad") {
  Rng rng(31);
  const CatalogFunction quad(FunctionId::quad, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = 0.01 + 0.98 * rng.uniform();
    const Vector x0 = sample_ball(Vector(3), 5.0, rng);
    const Trajectory t = run(quad, x0, alpha, 40);
    for (std::size_t k = 0; k <= 40; ++k) {
      const double factor = std::pow(1.0 - alpha, double(k));
      for (std::size_t d = 0; d < 3; ++d)
        CHECK(nsdyn::testing::near_rel(t.points[k][d], factor * x0[d], 1e-12, 1e-300));
    }
  }
}

TEST_CASE("property: chosen subgradients lie in the subdifferential") {
  Rng rng(32);
  const std::vector<CatalogFunction> fns = {
      CatalogFunction(FunctionId::abs_sum, 2), CatalogFunction(FunctionId::vee_bowl),
      CatalogFunction(FunctionId::wiggle), CatalogFunction(FunctionId::cross)};
  for (const CatalogFunction& fn : fns) {
    for (const auto& policy : {SelectionPolicy::minimal_norm(), SelectionPolicy::random_extreme(),
                               SelectionPolicy::fixed(1)}) {
      // Dyadic starts and steps land exactly on the kinks.
      const Vector x0 = fn.dim() == 1 ? Vector{0.5} : Vector{0.5, 0.75};
      const Trajectory t = run(fn, x0, 0.25, 30, policy, 99);
      for (std::size_t k = 0; k < t.steps(); ++k) {
        const auto set = fn.subdifferential(t.points[k], 0.0);
        std::vector<Vector> gens(set.generators.begin(), set.generators.end());
        CHECK(nsdyn::testing::hull_residual(gens, t.chosen_subgradients[k]) <= 1e-10);
        Vector expect = t.points[k];
        for (std::size_t d = 0; d < expect.dim(); ++d)
          expect[d] -= t.alpha * t.chosen_subgradients[k][d];
        CHECK(expect == t.points[k + 1]);
      }
    }
  }
}

TEST_CASE("property: replay is bit-exact") {
  const CatalogFunction abs2(FunctionId::abs_sum, 2);
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x0 = sample_ball({0.0, 0.0}, 1.0, rng);
    const std::uint64_t seed = rng.next_u64();
    const Trajectory a = run(abs2, {0.5, 0.5}, 0.125, 40, SelectionPolicy::random_extreme(), seed);
    const Trajectory b = run(abs2, {0.5, 0.5}, 0.125, 40, SelectionPolicy::random_extreme(), seed);
    CHECK(a == b);
    const Trajectory c = run(abs2, x0, 0.07, 60, SelectionPolicy::minimal_norm(), seed);
    CHECK(c == run(abs2, x0, 0.07, 60, SelectionPolicy::minimal_norm(), seed));
  }
}

TEST_CASE("property: interpolation hits every node exactly") {
  Rng rng(34);
  const CatalogFunction vee(FunctionId::vee_bowl);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = 0.001 + 0.3 * rng.uniform();
    const Trajectory t = run(vee, sample_ball({0.0, 0.0}, 1.0, rng), alpha, 50);
    const InterpolatedPath path(t, 1e9);
    for (std::size_t k = 0; k <= t.steps(); ++k)
      CHECK(path.at(alpha * double(k)) == t.points[k]);
  }
}

TEST_CASE("property: cross iterates avoid the axes almost surely") {
  const CatalogFunction cross(FunctionId::cross);
  Rng rng(35);
  std::size_t hits = 0;
  for (int n = 0; n < 10000; ++n) {
    const Vector x0 = sample_ball({1.0, 0.0}, 0.5, rng);
    REQUIRE(x0[0] * x0[1] != 0.0);
    Vector x = x0;
    for (int k = 0; k < 200; ++k) {
      x = step(cross, x, 0.1, {}, rng).next;
      if (x[0] == 0.0 || x[1] == 0.0) ++hits;
    }
  }
  CHECK(hits == 0);
}

TEST_CASE("ball sampler") {
  Rng rng(36);
  double mean_u = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Vector x = sample_ball({1.0, -2.0, 0.5}, 0.3, rng);
    const double r = distance(x, {1.0, -2.0, 0.5});
    CHECK(r <= 0.3);
    mean_u += std::pow(r / 0.3, 3.0);  // uniform on [0, 1] for a uniform ball
  }
  CHECK(mean_u / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("policy parsing") {
  CHECK(SelectionPolicy::parse("minimal_norm") == SelectionPolicy::minimal_norm());
  CHECK(SelectionPolicy::parse("random_extreme") == SelectionPolicy::random_extreme());
  CHECK(SelectionPolicy::parse("fixed_index:4") == SelectionPolicy::fixed(4));
  CHECK(SelectionPolicy::parse(SelectionPolicy::fixed(7).to_string()) == SelectionPolicy::fixed(7));
  CHECK_THROWS_AS(SelectionPolicy::parse("fixed_index:"), InvalidArgument);
  CHECK_THROWS_AS(SelectionPolicy::parse("steepest"), InvalidArgument);
}
