#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nsdyn/engine.hpp"
#include "nsdyn/vector.hpp"

namespace nsdyn {

/// f(x1, x2) = |x1|^{3/2} |x2|^{3/2} has a non-strict local minimum at
/// (1, 0) that the constant-step subgradient method leaves from almost every
/// nearby start. The helpers below check that mechanism piece by piece.

/// One subgradient step on cross, written out coordinate by coordinate:
///   x1' = x1 - 3/2 alpha |x1|^{1/2} |x2|^{3/2} sign(x1)
///   x2' = x2 - 3/2 alpha |x1|^{3/2} |x2|^{1/2} sign(x2)
/// Throws OnNullSet when x1 * x2 == 0.
Vector cross_update(const Vector& x, double alpha);

/// For x1 >= 1/2 and 0 < |x2| <= alpha^2 / 32, one step at least doubles
/// |x2|. Returns whether |x2'| >= 2 |x2| holds as a floating-point
/// inequality. Throws PreconditionViolated outside that region.
bool doubling_check(const Vector& x, double alpha);

struct EscapeStats {
  double epsilon = 0.0;
  double alpha = 0.0;
  std::size_t samples = 0;
  std::size_t max_steps = 0;
  std::uint64_t seed = 0;
  std::size_t escaped_count = 0;
  /// Largest exit index among escapers; nullopt when nothing escaped.
  std::optional<std::size_t> max_exit_index;
  /// Starts with x2 == 0 exactly (fixed points of the method).
  std::size_t stuck_on_S_count = 0;
  /// Off-S starts that stayed in the ball for the whole budget. Kept for
  /// inspection rather than discarded.
  std::vector<Vector> non_escaping_off_S;
  /// Per sample, in sample order: start and exit index (nullopt if none).
  std::vector<Vector> starts;
  std::vector<std::optional<std::size_t>> exit_indices;

  /// Merges stats of disjoint sample sets of the same experiment.
  EscapeStats& operator+=(const EscapeStats& other);
};

/// Start n of an experiment: uniform in B((1, 0), epsilon), stream n of seed.
Vector escape_initial_point(double epsilon, std::uint64_t seed, std::size_t n);

/// Runs the engine on cross from `samples` uniform starts in B((1,0), epsilon)
/// and counts exits from that ball within `max_steps` iterations.
EscapeStats escape_experiment(double epsilon, double alpha, std::size_t samples,
                              std::size_t max_steps, std::uint64_t seed, unsigned threads = 0);

/// Same experiment from explicit starting points.
EscapeStats escape_experiment(double epsilon, double alpha, const std::vector<Vector>& starts,
                              std::size_t max_steps, unsigned threads = 0);

/// True iff x1 strictly decreases along the trajectory. Throws
/// PreconditionViolated unless the trajectory is on cross, every point is off
/// the axes and x1 stays positive.
bool monotone_drift_check(const Trajectory& traj);

}  // namespace nsdyn
