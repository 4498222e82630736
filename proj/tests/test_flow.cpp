#include <doctest.h>

#include <cmath>

#include "nsdyn/errors.hpp"
#include "nsdyn/flow.hpp"
#include "nsdyn/rng.hpp"

using namespace nsdyn;

namespace {

DeviationReport interpolation_deviation(const CatalogFunction& fn, const Vector& x0, double alpha,
                                double horizon) {
  const auto steps = static_cast<std::size_t>(std::llround(horizon / alpha));
  const InterpolatedPath path(run(fn, x0, alpha, steps), horizon);
  return sup_deviation(path, integrate_flow(fn, x0, path.end_time(), alpha / 100.0));
}

}  // namespace

TEST_CASE("integrate_flow examples") {
  SUBCASE("quad tracks the exponential") {
    const FlowSolution sol = integrate_flow(CatalogFunction(FunctionId::quad, 1), {1.0}, 1.0, 1e-3);
    CHECK(sol.times.back() == 1.0);
    CHECK(sol.nodes.size() == 1001);
    CHECK(std::fabs(sol.nodes.back()[0] - std::exp(-1.0)) <= 2e-4);
  }
  SUBCASE("cross critical point") {
    const FlowSolution sol =
        integrate_flow(CatalogFunction(FunctionId::cross), {1.0, 0.0}, 2.0, 0.01);
    for (const Vector& x : sol.nodes) CHECK(x == Vector{1.0, 0.0});
  }
  SUBCASE("abs_sum reaches the minimum and stays within h") {
    const double h = 1e-4;
    const FlowSolution sol =
        integrate_flow(CatalogFunction(FunctionId::abs_sum, 1), {0.05}, 1.0, h);
    for (std::size_t j = 0; j < sol.times.size(); ++j) {
      const double exact = std::max(0.05 - sol.times[j], 0.0);
      CHECK(std::fabs(sol.nodes[j][0]) <= exact + h * (1 + 1e-9));
      if (sol.times[j] >= 0.05) CHECK(std::fabs(sol.nodes[j][0]) <= h * (1 + 1e-9));
    }
  }
  SUBCASE("final short step lands on T") {
    const FlowSolution sol =
        integrate_flow(CatalogFunction(FunctionId::quad, 1), {1.0}, 0.105, 0.01);
    CHECK(sol.times.size() == 12);
    CHECK(sol.times.back() == 0.105);
    CHECK(sol.times[10] == doctest::Approx(0.1));
  }
  SUBCASE("argument checks") {
    const CatalogFunction quad(FunctionId::quad, 1);
    CHECK_THROWS_AS(integrate_flow(quad, {1.0}, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(integrate_flow(quad, {1.0}, 1.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(integrate_flow(quad, {1.0, 2.0}, 1.0, 0.1), DimensionMismatch);
    CHECK_THROWS_AS(integrate_flow(quad, {1e200}, 1.0, 0.5), NonFiniteState);
  }
}

TEST_CASE("energy_residual examples") {
  const CatalogFunction quad(FunctionId::quad, 1);
  // Closed form of the discrete scheme: x_j = (1-h)^j. Residuals computed
  // offline from that closed form: 2.16092e-4 and 1.08065e-4.
  const double r1 = energy_residual(quad, integrate_flow(quad, {1.0}, 1.0, 1e-3));
  const double r2 = energy_residual(quad, integrate_flow(quad, {1.0}, 1.0, 5e-4));
  CHECK(r1 == doctest::Approx(2.1609186e-4).epsilon(1e-6));
  CHECK(r2 == doctest::Approx(1.0806452e-4).epsilon(1e-6));
  // f drop and the integral both tend to 0.4323323...
  const FlowSolution fine = integrate_flow(quad, {1.0}, 1.0, 1e-5);
  CHECK(fine.f_values.front() - fine.f_values.back() == doctest::Approx(0.5 - 0.5 * std::exp(-2.0)).epsilon(1e-4));

  const CatalogFunction cross(FunctionId::cross);
  CHECK(energy_residual(cross, integrate_flow(cross, {1.0, 0.0}, 1.0, 0.01)) == 0.0);

  const CatalogFunction abs1(FunctionId::abs_sum, 1);
  for (double h : {1e-3, 5e-4, 1e-4})
    CHECK(energy_residual(abs1, integrate_flow(abs1, {0.05}, 0.05, h)) <= 2 * h);

  CHECK_THROWS_AS(energy_residual(abs1, integrate_flow(quad, {1.0}, 1.0, 0.1)), InvalidArgument);
}

TEST_CASE("exact_flow_quadratic examples") {
  const Vector a = exact_flow_quadratic({1.0, 0.0}, 1.0);
  CHECK(a[0] == doctest::Approx(0.3678794412).epsilon(1e-10));
  CHECK(a[1] == 0.0);
  CHECK(exact_flow_quadratic({0.0, 0.0, 0.0}, 7.0) == Vector{0.0, 0.0, 0.0});
  CHECK(exact_flow_quadratic({2.0}, 0.0) == Vector{2.0});
  CHECK_THROWS_AS(exact_flow_quadratic({2.0}, -1.0), InvalidArgument);
}

TEST_CASE("sup_deviation examples") {
  const CatalogFunction quad(FunctionId::quad, 1);
  // max_k |0.9^k - e^{-0.1 k}| = 0.019201 at k = 10; the flow itself is
  // (1-h)^{t/h}, giving 0.0190170 on the union grid.
  const DeviationReport a = interpolation_deviation(quad, {1.0}, 0.1, 1.0);
  CHECK(a.sup_dev == doctest::Approx(0.0192).epsilon(0.002 / 0.0192));
  CHECK(a.sup_dev == doctest::Approx(0.019016984670963633).epsilon(1e-9));
  CHECK(a.t_argmax == doctest::Approx(1.0));
  const DeviationReport b = interpolation_deviation(quad, {1.0}, 0.05, 1.0);
  CHECK(b.sup_dev == doctest::Approx(0.009301529737469116).epsilon(1e-9));

  const DeviationReport c = interpolation_deviation(CatalogFunction(FunctionId::cross), {1.0, 0.0}, 0.1, 1.0);
  CHECK(c.sup_dev == 0.0);

  const InterpolatedPath path(run(quad, {1.0}, 0.1, 10), 1.0);
  CHECK_THROWS_AS(sup_deviation(path, integrate_flow(quad, {1.0}, 2.0, 0.01)), HorizonMismatch);
}

TEST_CASE("property: flows descend up to L*h") {
  Rng rng(41);
  const std::vector<CatalogFunction> fns = {
      CatalogFunction(FunctionId::quad, 2),  CatalogFunction(FunctionId::abs_sum, 2),
      CatalogFunction(FunctionId::cross),    CatalogFunction(FunctionId::vee_bowl),
      CatalogFunction(FunctionId::wiggle),   CatalogFunction(FunctionId::neg_norm, 2)};
  for (const CatalogFunction& fn : fns) {
    for (int trial = 0; trial < 10; ++trial) {
      const Vector x0 = sample_ball(Vector(fn.dim()), 1.0, rng);
      const double h = 1e-3;
      const FlowSolution sol = integrate_flow(fn, x0, 1.0, h);
      const double lip = sol.observed_lipschitz();
      INFO(fn.name(), " from ", x0.to_string());
      // One Euler step moves at most lip * h, so f can rise by at most lip * lip * h.
      CHECK(sol.monotone_within(lip * std::max(lip, 1.0) * h));
      if (fn.dim() == 1) CHECK(sol.monotone_within(lip * h));
    }
  }
}

TEST_CASE("property: energy residual is first order in h") {
  const CatalogFunction quad(FunctionId::quad, 2);
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x0 = sample_ball({0.0, 0.0}, 2.0, rng);
    const double coarse = energy_residual(quad, integrate_flow(quad, x0, 1.0, 2e-3));
    const double fine = energy_residual(quad, integrate_flow(quad, x0, 1.0, 1e-3));
    CHECK(coarse / fine >= 1.5);
    CHECK(coarse / fine <= 4.0);
  }
  // abs_sum: the scheme is exact on the unit-slope descent phase, so the
  // residual is round-off at every h rather than a first-order term.
  const CatalogFunction abs2(FunctionId::abs_sum, 2);
  for (double h : {2e-3, 1e-3, 5e-4})
    CHECK(energy_residual(abs2, integrate_flow(abs2, {0.05, -0.04}, 0.04, h)) <= 2 * h);
}

TEST_CASE("property: discrete-continuous deviation shrinks with alpha") {
  for (const auto& [fn, x0] :
       {std::pair{CatalogFunction(FunctionId::quad, 1), Vector{1.0}},
        std::pair{CatalogFunction(FunctionId::vee_bowl), Vector{0.41, 0.5}}}) {
    double prev = -1.0;
    for (double alpha : {0.2, 0.1, 0.05, 0.025}) {
      const double dev = interpolation_deviation(fn, x0, alpha, 1.0).sup_dev;
      INFO(fn.name(), " alpha ", alpha, " dev ", dev);
      if (prev > 0.0) CHECK(dev <= 0.75 * prev);
      prev = dev;
    }
  }
}

TEST_CASE("vee_bowl deviation values") {
  // Chatter amplitude across x1 = 0 is max(r, alpha - r) with r = x1 mod alpha;
  // x1 = 0.41 keeps r small on every grid. Values from an independent simulation.
  const CatalogFunction fn(FunctionId::vee_bowl);
  const double expected[] = {0.19659045553898588, 0.09217717838963144, 0.04110874062062224,
                             0.015703560533633282};
  const double alphas[] = {0.2, 0.1, 0.05, 0.025};
  for (int i = 0; i < 4; ++i)
    CHECK(interpolation_deviation(fn, {0.41, 0.5}, alphas[i], 1.0).sup_dev ==
          doctest::Approx(expected[i]).epsilon(1e-3));
}

TEST_CASE("property: quad flow matches the exponential within h") {
  Rng rng(43);
  const CatalogFunction quad(FunctionId::quad, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Vector x0 = sample_ball({0.0, 0.0}, 2.0, rng);
    const double horizon = 0.1 + 1.9 * rng.uniform();
    const double h = 1e-3;
    const FlowSolution sol = integrate_flow(quad, x0, horizon, h);
    for (std::size_t j = 0; j < sol.times.size(); ++j)
      worst = std::max(worst, distance(sol.nodes[j], exact_flow_quadratic(x0, sol.times[j])) / h);
  }
  CHECK(worst <= 1.0);
}
