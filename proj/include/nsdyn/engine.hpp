#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsdyn/catalog.hpp"
#include "nsdyn/rng.hpp"
#include "nsdyn/vector.hpp"

namespace nsdyn {

/// Which element of the subdifferential a step uses.
struct SelectionPolicy {
  enum class Kind { minimal_norm, random_extreme, fixed_index };

  Kind kind = Kind::minimal_norm;
  std::size_t index = 0;  // fixed_index only; taken modulo the generator count

  static SelectionPolicy minimal_norm() { return {}; }
  static SelectionPolicy random_extreme() { return {Kind::random_extreme, 0}; }
  static SelectionPolicy fixed(std::size_t i) { return {Kind::fixed_index, i}; }

  /// "minimal_norm", "random_extreme" or "fixed_index:<i>".
  std::string to_string() const;
  static SelectionPolicy parse(std::string_view text);

  friend bool operator==(const SelectionPolicy&, const SelectionPolicy&) = default;
};

/// Picks one generator (or the minimal-norm element). Only random_extreme
/// draws from `rng`, exactly once per call.
Vector select_subgradient(const SubdifferentialSet& set, const SelectionPolicy& policy, Rng& rng);

/// Any coordinate above this magnitude counts as divergence.
inline constexpr double kDivergenceThreshold = 1e100;

struct StepResult {
  Vector next;
  Vector subgradient;
  bool diverged = false;
};

/// x' = x - alpha * s with s chosen from the exact (active_tol = 0)
/// subdifferential at x.
StepResult step(const CatalogFunction& fn, const Vector& x, double alpha,
                const SelectionPolicy& policy, Rng& rng);

struct Ball {
  Vector center;
  double radius = 0.0;

  bool contains(const Vector& x) const { return distance(x, center) <= radius; }
};

/// Discrete iterates x_0..x_K of the constant-step subgradient method plus
/// everything needed to replay them bit for bit.
struct Trajectory {
  FunctionId fn_id = FunctionId::quad;
  double alpha = 0.0;
  std::vector<Vector> points;               // x_0 .. x_K
  std::vector<Vector> chosen_subgradients;  // s_0 .. s_{K-1}
  SelectionPolicy policy;
  std::uint64_t seed = 0;
  /// Index of the first point with a coordinate beyond kDivergenceThreshold.
  std::optional<std::size_t> diverged_at;

  std::size_t steps() const { return chosen_subgradients.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points.front().dim(); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Iterates up to `steps` times. Halts early on divergence or, when `stop` is
/// given, as soon as a point lies outside the stop ball (that point is kept).
Trajectory run(const CatalogFunction& fn, const Vector& x0, double alpha, std::size_t steps,
               const SelectionPolicy& policy = {}, std::uint64_t seed = 0,
               const std::optional<Ball>& stop = std::nullopt);

/// Outcome of iterating without storing the path.
struct ExitScan {
  std::optional<std::size_t> exit_index;
  std::size_t steps_taken = 0;
  bool diverged = false;
  Vector last;
};

/// Same iteration (and random stream) as `run` with a stop ball, without
/// recording points. Used by the Monte Carlo drivers.
ExitScan scan_for_exit(const CatalogFunction& fn, const Vector& x0, double alpha,
                       std::size_t steps, const SelectionPolicy& policy, std::uint64_t seed,
                       const Ball& ball);

/// Smallest k with |x_k - center| > radius.
std::optional<std::size_t> first_exit(const Trajectory& traj, const Vector& center, double radius);

/// Piecewise-linear interpolation through the iterates, node k at time alpha*k,
/// defined on [0, min(T, alpha*K)].
class InterpolatedPath {
 public:
  InterpolatedPath(Trajectory trajectory, double horizon);

  const Trajectory& trajectory() const { return traj_; }
  double horizon() const { return horizon_; }
  /// min(T, alpha * K)
  double end_time() const { return end_; }
  /// Node times alpha*k that fall inside [0, end_time()].
  std::vector<double> node_times() const;

  Vector at(double t) const;

 private:
  Trajectory traj_;
  double horizon_;
  double end_;
};

Vector interpolate(const InterpolatedPath& path, double t);

}  // namespace nsdyn
