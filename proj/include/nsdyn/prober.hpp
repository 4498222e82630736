#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nsdyn/catalog.hpp"
#include "nsdyn/engine.hpp"
#include "nsdyn/vector.hpp"

namespace nsdyn {

/// A truncated test of discrete Lyapunov stability at x_star: do iterates
/// started within delta of x_star, with any step up to alpha_bar, stay within
/// epsilon?
struct StabilityQuery {
  FunctionId fn_id = FunctionId::quad;
  Vector x_star;
  double epsilon = 0.1;
  std::vector<double> delta_grid;  // decreasing; empty selects the default grid
  std::vector<double> alpha_grid;  // decreasing; empty selects the default grid
  std::size_t samples = 100;
  /// Iteration budget per trajectory; nullopt selects ceil(T / alpha) * 50
  /// with T = epsilon / (3 L).
  std::optional<std::size_t> max_iters;
  SelectionPolicy policy;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

inline constexpr double kLipschitzSafety = 1.1;
inline constexpr std::size_t kHorizonRepetitions = 50;
inline constexpr std::size_t kLipschitzSamples = 1000;

/// epsilon * {1/2, 1/4, 1/8, 1/16}
std::vector<double> default_delta_grid(double epsilon);
/// {0.2, 0.1, 0.05, 0.01} * epsilon / L
std::vector<double> default_alpha_grid(double epsilon, double lipschitz);
/// ceil(T / alpha) * 50 with T = epsilon / (3 L)
std::size_t default_max_iters(double epsilon, double lipschitz, double alpha);

enum class StabilityStatus { no_escape_observed, escape_witnessed };
std::string_view to_string(StabilityStatus s);

struct StabilityCertificate {
  double epsilon;
  double delta;
  double alpha_bar;
  std::size_t samples;
  std::size_t max_iters;  // budget used at alpha_bar
};

struct EscapeWitness {
  Vector x0;
  double delta;
  double alpha;
  std::size_t sample_index;
  std::size_t exit_index;
  Trajectory trajectory;  // stops at the exit; replays with run()
};

struct ProbeCell {
  double delta;
  double alpha;
  std::size_t max_iters;
  std::size_t escapes;
};

struct StabilityVerdict {
  StabilityQuery query;  // with grids and budget filled in
  StabilityStatus status = StabilityStatus::no_escape_observed;
  std::optional<StabilityCertificate> certificate;
  std::optional<EscapeWitness> witness;
  std::vector<ProbeCell> cells;  // delta-major, grid order
  double lipschitz_estimate = 0.0;
};

/// 1.1 * max |s| over s in df(x), x ranging over the center and `samples`
/// uniform points of B(center, radius).
double estimate_lipschitz(const CatalogFunction& fn, const Vector& center, double radius,
                          std::size_t samples, std::uint64_t seed);

/// Initial point of sample n at radius delta: x_star + delta * u_n, with u_n
/// uniform in the unit ball and drawn from stream n of `seed`.
Vector probe_initial_point(const Vector& x_star, double delta, std::uint64_t seed, std::size_t n);
/// Seed of the trajectory of sample n (used by random_extreme selection).
std::uint64_t probe_trajectory_seed(std::uint64_t seed, std::size_t n);

/// Runs every (delta, alpha) cell. A pair (delta, alpha_bar) certifies when
/// no trajectory escapes in any cell (delta', alpha) with delta' <= delta and
/// alpha <= alpha_bar;
/// the first delta with a certificate wins, taking the largest such
/// alpha_bar. Otherwise the lexicographically first escape (delta index,
/// alpha index, sample index) is returned as a witness. "No escape" is
/// relative to the budget, the sample and the selection policy.
/// Throws InvalidQuery for malformed queries.
StabilityVerdict probe(const StabilityQuery& query);

struct LocalMinCheck {
  bool consistent_with_local_min = true;
  std::optional<Vector> counterexample_point;
  double center_value = 0.0;
  std::optional<double> counterexample_value;
};

/// Searches B(x_star, radius) for a point with f(x) < f(x_star) - 1e-12.
LocalMinCheck local_min_check(const CatalogFunction& fn, const Vector& x_star, double radius,
                              std::size_t samples, std::uint64_t seed);

/// Constant-step guarantees for convex f, evaluated on one run.
struct BoundReport {
  FunctionId fn_id = FunctionId::quad;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::size_t steps = 0;
  double c = 0.0;  // largest subgradient norm on the visited points
  double initial_distance = 0.0;
  double liminf_gap = 0.0;  // min gap over the second half of the run
  double bound_c2a2 = 0.0;  // c^2 alpha / 2
  bool liminf_within_bound = false;
  std::size_t iters_budget = 0;  // floor(d(x0, X)^2 / (alpha epsilon))
  double min_gap_within_budget = 0.0;
  bool achieved_within_budget = false;  // min gap <= c^2 alpha / 2 + epsilon
  std::optional<double> beta;
  std::optional<double> dist_bound;  // c sqrt(alpha) / sqrt(2 beta), alpha <= 1/(2 beta)
  double terminal_distance = 0.0;
  std::optional<bool> dist_within_bound;
};

/// Throws NotConvex unless fn is convex with known minimizers.
BoundReport convex_bounds_report(const CatalogFunction& fn, const Vector& x0, double alpha,
                                 double epsilon, std::size_t steps, std::uint64_t seed);

}  // namespace nsdyn
