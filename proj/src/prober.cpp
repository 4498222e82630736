#include "nsdyn/prober.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nsdyn/errors.hpp"
#include "nsdyn/parallel.hpp"
#include "nsdyn/rng.hpp"

namespace nsdyn {

namespace {

// Stream offsets keep the Lipschitz and local-min samplers away from the
// per-sample streams 0, 1, 2, ... of the probe.
constexpr std::uint64_t kLipschitzStream = 0xA11CE5ULL << 32;

bool strictly_decreasing_positive(const std::vector<double>& grid) {
  if (grid.empty()) return false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) return false;
    if (i > 0 && !(grid[i] < grid[i - 1])) return false;
  }
  return true;
}

// floor() that does not lose an integer to representation error, e.g.
// 1 / (0.1 * 0.1) = 99.99999999999998.
std::size_t robust_floor(double v) {
  return static_cast<std::size_t>(std::floor(v * (1.0 + 1e-12)));
}

}  // namespace

std::string_view to_string(StabilityStatus s) {
  return s == StabilityStatus::no_escape_observed ? "no_escape_observed" : "escape_witnessed";
}

std::vector<double> default_delta_grid(double epsilon) {
  return {epsilon / 2.0, epsilon / 4.0, epsilon / 8.0, epsilon / 16.0};
}

std::vector<double> default_alpha_grid(double epsilon, double lipschitz) {
  const double unit = epsilon / lipschitz;
  return {0.2 * unit, 0.1 * unit, 0.05 * unit, 0.01 * unit};
}

std::size_t default_max_iters(double epsilon, double lipschitz, double alpha) {
  const double horizon = epsilon / (3.0 * lipschitz);
  return static_cast<std::size_t>(std::ceil(horizon / alpha)) * kHorizonRepetitions;
}

double estimate_lipschitz(const CatalogFunction& fn, const Vector& center, double radius,
                          std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("estimate_lipschitz needs at least one sample");
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  double best = 0.0;
  auto visit = [&](const Vector& x) {
    for (const Vector& g : fn.subdifferential(x, 0.0).generators) best = std::max(best, g.norm());
  };
  visit(center);
  Rng rng(derive_seed(seed, kLipschitzStream));
  for (std::size_t i = 0; i < samples; ++i) visit(sample_ball(center, radius, rng));
  return kLipschitzSafety * best;
}

Vector probe_initial_point(const Vector& x_star, double delta, std::uint64_t seed, std::size_t n) {
  Rng rng(derive_seed(seed, n));
  const Vector u = sample_ball(Vector(x_star.dim()), 1.0, rng);
  Vector x = x_star;
  for (std::size_t i = 0; i < x.dim(); ++i) x[i] += delta * u[i];
  return x;
}

std::uint64_t probe_trajectory_seed(std::uint64_t seed, std::size_t n) {
  return derive_seed(derive_seed(seed, n), 1);
}

StabilityVerdict probe(const StabilityQuery& query) {
  StabilityVerdict verdict;
  StabilityQuery& q = verdict.query;
  q = query;

  if (q.x_star.empty()) throw InvalidQuery("x_star is empty");
  if (!q.x_star.is_finite()) throw InvalidQuery("x_star is not finite");
  if (!(q.epsilon > 0.0) || !std::isfinite(q.epsilon)) throw InvalidQuery("epsilon must be positive");
  if (q.samples < 1) throw InvalidQuery("samples must be positive");
  if (q.max_iters && *q.max_iters < 1) throw InvalidQuery("max_iters must be positive");

  std::optional<CatalogFunction> fn_holder;
  try {
    fn_holder.emplace(q.fn_id, q.x_star.dim());
  } catch (const Error& e) {
    throw InvalidQuery(e.what());
  }
  const CatalogFunction& fn = *fn_holder;

  double lip = estimate_lipschitz(fn, q.x_star, q.epsilon, kLipschitzSamples, q.seed);
  if (!(lip > 0.0)) lip = 1.0;  // flat ball: any positive scale will do
  verdict.lipschitz_estimate = lip;

  if (q.delta_grid.empty()) q.delta_grid = default_delta_grid(q.epsilon);
  if (q.alpha_grid.empty()) q.alpha_grid = default_alpha_grid(q.epsilon, lip);
  if (!strictly_decreasing_positive(q.delta_grid))
    throw InvalidQuery("delta grid must be a nonempty decreasing list of positive reals");
  if (!strictly_decreasing_positive(q.alpha_grid))
    throw InvalidQuery("alpha grid must be a nonempty decreasing list of positive reals");
  if (!(q.delta_grid.front() < q.epsilon)) throw InvalidQuery("every delta must be below epsilon");

  const std::size_t nd = q.delta_grid.size();
  const std::size_t na = q.alpha_grid.size();
  const std::size_t ns = q.samples;
  std::vector<std::size_t> budget(na);
  for (std::size_t j = 0; j < na; ++j)
    budget[j] = q.max_iters ? *q.max_iters : default_max_iters(q.epsilon, lip, q.alpha_grid[j]);

  const Ball ball{q.x_star, q.epsilon};
  // exit[cell * ns + n]: exit index of sample n in that cell, or max() if none.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> exits(nd * na * ns, kNone);
  parallel_for(nd * na * ns, q.threads, [&](std::size_t flat) {
    const std::size_t n = flat % ns;
    const std::size_t cell = flat / ns;
    const std::size_t i = cell / na;
    const std::size_t j = cell % na;
    const Vector x0 = probe_initial_point(q.x_star, q.delta_grid[i], q.seed, n);
    const ExitScan scan = scan_for_exit(fn, x0, q.alpha_grid[j], budget[j], q.policy,
                                        probe_trajectory_seed(q.seed, n), ball);
    if (scan.exit_index) exits[flat] = *scan.exit_index;
  });

  verdict.cells.reserve(nd * na);
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const std::size_t cell = i * na + j;
      const auto first = exits.begin() + static_cast<std::ptrdiff_t>(cell * ns);
      const auto escapes = static_cast<std::size_t>(
          std::count_if(first, first + static_cast<std::ptrdiff_t>(ns),
                        [](std::size_t e) { return e != kNone; }));
      verdict.cells.push_back({q.delta_grid[i], q.alpha_grid[j], budget[j], escapes});
    }
  }

  // Starts drawn at a smaller delta also lie in the larger ball, so (delta_i,
  // alpha_j) certifies only when every cell (i' >= i, j' >= j) is clean.
  std::vector<std::size_t> first_clean(nd);
  for (std::size_t i = nd; i-- > 0;) {
    std::size_t j = na;
    while (j > 0 && verdict.cells[i * na + j - 1].escapes == 0) --j;
    first_clean[i] = i + 1 < nd ? std::max(j, first_clean[i + 1]) : j;
  }
  for (std::size_t i = 0; i < nd && !verdict.certificate; ++i) {
    const std::size_t j = first_clean[i];
    if (j < na)
      verdict.certificate =
          StabilityCertificate{q.epsilon, q.delta_grid[i], q.alpha_grid[j], ns, budget[j]};
  }
  if (verdict.certificate) {
    verdict.status = StabilityStatus::no_escape_observed;
    return verdict;
  }

  verdict.status = StabilityStatus::escape_witnessed;
  for (std::size_t flat = 0; flat < exits.size(); ++flat) {
    if (exits[flat] == kNone) continue;
    const std::size_t n = flat % ns;
    const std::size_t cell = flat / ns;
    const double delta = q.delta_grid[cell / na];
    const double alpha = q.alpha_grid[cell % na];
    const Vector x0 = probe_initial_point(q.x_star, delta, q.seed, n);
    Trajectory traj = run(fn, x0, alpha, budget[cell % na], q.policy,
                          probe_trajectory_seed(q.seed, n), ball);
    verdict.witness = EscapeWitness{x0, delta, alpha, n, exits[flat], std::move(traj)};
    break;
  }
  return verdict;
}

LocalMinCheck local_min_check(const CatalogFunction& fn, const Vector& x_star, double radius,
                              std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("local_min_check needs at least one sample");
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  LocalMinCheck out;
  out.center_value = fn.evaluate(x_star);
  const double threshold = out.center_value - 1e-12;
  for (std::size_t n = 0; n < samples; ++n) {
    Rng rng(derive_seed(seed, n));
    Vector x = sample_ball(x_star, radius, rng);
    const double v = fn.evaluate(x);
    if (v < threshold) {
      out.consistent_with_local_min = false;
      out.counterexample_point = std::move(x);
      out.counterexample_value = v;
      break;
    }
  }
  return out;
}

BoundReport convex_bounds_report(const CatalogFunction& fn, const Vector& x0, double alpha,
                                 double epsilon, std::size_t steps, std::uint64_t seed) {
  if (!fn.convex() || fn.known_minimizers().empty() || !fn.minimum_value())
    throw NotConvex(std::string(fn.name()) + " is not a registered convex function");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");

  const Trajectory traj = run(fn, x0, alpha, steps, SelectionPolicy::minimal_norm(), seed);
  const double fmin = *fn.minimum_value();

  BoundReport rep;
  rep.fn_id = fn.id();
  rep.alpha = alpha;
  rep.epsilon = epsilon;
  rep.steps = traj.steps();

  std::vector<double> gaps;
  gaps.reserve(traj.points.size());
  for (const Vector& x : traj.points) {
    for (const Vector& g : fn.subdifferential(x, 0.0).generators) rep.c = std::max(rep.c, g.norm());
    gaps.push_back(fn.evaluate(x) - fmin);
  }

  rep.initial_distance = fn.distance_to_minimizers(x0);
  rep.bound_c2a2 = rep.c * rep.c * alpha / 2.0;
  rep.liminf_gap = *std::min_element(gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2),
                                     gaps.end());
  rep.liminf_within_bound = rep.liminf_gap <= rep.bound_c2a2;

  rep.iters_budget = robust_floor(rep.initial_distance * rep.initial_distance / (alpha * epsilon));
  const std::size_t horizon = std::min(rep.iters_budget, gaps.size() - 1);
  rep.min_gap_within_budget = *std::min_element(
      gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(horizon) + 1);
  rep.achieved_within_budget = rep.min_gap_within_budget <= rep.bound_c2a2 + epsilon;

  rep.terminal_distance = fn.distance_to_minimizers(traj.points.back());
  rep.beta = fn.growth_beta();
  if (rep.beta && alpha <= 1.0 / (2.0 * *rep.beta)) {
    rep.dist_bound = rep.c * std::sqrt(alpha) / std::sqrt(2.0 * *rep.beta);
    rep.dist_within_bound = rep.terminal_distance <= *rep.dist_bound;
  }
  return rep;
}

}  // namespace nsdyn
