#include "nsdyn/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "nsdyn/errors.hpp"
#include "nsdyn/parallel.hpp"
#include "nsdyn/rng.hpp"

namespace nsdyn {

namespace {

double sign_nonzero(double v) { return v < 0.0 ? -1.0 : 1.0; }

void require_planar(const Vector& x) {
  if (x.dim() != 2) throw DimensionMismatch("cross is defined on R^2");
}

}  // namespace

Vector cross_update(const Vector& x, double alpha) {
  require_planar(x);
  if (x[0] == 0.0 || x[1] == 0.0)
    throw OnNullSet("(" + x.to_string() + ") lies on x1 * x2 = 0");
  const double a1 = std::fabs(x[0]);
  const double a2 = std::fabs(x[1]);
  return Vector{
      x[0] - 1.5 * alpha * std::pow(a1, 0.5) * std::pow(a2, 1.5) * sign_nonzero(x[0]),
      x[1] - 1.5 * alpha * std::pow(a1, 1.5) * std::pow(a2, 0.5) * sign_nonzero(x[1]),
  };
}

bool doubling_check(const Vector& x, double alpha) {
  require_planar(x);
  if (!(alpha > 0.0)) throw PreconditionViolated("alpha must be positive");
  const double a2 = std::fabs(x[1]);
  if (!(x[0] >= 0.5) || !(a2 > 0.0) || !(a2 <= alpha * alpha / 32.0))
    throw PreconditionViolated("doubling needs x1 >= 1/2 and 0 < |x2| <= alpha^2/32, got (" +
                               x.to_string() + ")");
  return std::fabs(cross_update(x, alpha)[1]) >= 2.0 * a2;
}

EscapeStats& EscapeStats::operator+=(const EscapeStats& o) {
  samples += o.samples;
  escaped_count += o.escaped_count;
  stuck_on_S_count += o.stuck_on_S_count;
  if (o.max_exit_index)
    max_exit_index = std::max(max_exit_index.value_or(0), *o.max_exit_index);
  non_escaping_off_S.insert(non_escaping_off_S.end(), o.non_escaping_off_S.begin(),
                            o.non_escaping_off_S.end());
  starts.insert(starts.end(), o.starts.begin(), o.starts.end());
  exit_indices.insert(exit_indices.end(), o.exit_indices.begin(), o.exit_indices.end());
  return *this;
}

Vector escape_initial_point(double epsilon, std::uint64_t seed, std::size_t n) {
  Rng rng(derive_seed(seed, n));
  return sample_ball(Vector{1.0, 0.0}, epsilon, rng);
}

namespace {

EscapeStats run_experiment(double epsilon, double alpha, std::size_t count,
                           std::size_t max_steps, unsigned threads,
                           const std::function<Vector(std::size_t)>& start_of) {
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw InvalidArgument("epsilon must lie in (0, 1/2]");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (count < 1 || max_steps < 1) throw InvalidArgument("samples and max_steps must be positive");

  const CatalogFunction cross(FunctionId::cross);
  const Ball ball{Vector{1.0, 0.0}, epsilon};
  std::vector<EscapeStats> per_sample(count);
  parallel_for(count, threads, [&](std::size_t n) {
    EscapeStats& s = per_sample[n];
    s.samples = 1;
    const Vector x0 = start_of(n);
    const ExitScan scan =
        scan_for_exit(cross, x0, alpha, max_steps, SelectionPolicy::minimal_norm(), 0, ball);
    s.starts.push_back(x0);
    s.exit_indices.push_back(scan.exit_index);
    if (scan.exit_index) {
      s.escaped_count = 1;
      s.max_exit_index = *scan.exit_index;
    } else if (x0[1] == 0.0) {
      s.stuck_on_S_count = 1;
    } else {
      s.non_escaping_off_S.push_back(x0);
    }
  });

  EscapeStats total;
  for (const EscapeStats& s : per_sample) total += s;
  total.epsilon = epsilon;
  total.alpha = alpha;
  total.max_steps = max_steps;
  return total;
}

}  // namespace

EscapeStats escape_experiment(double epsilon, double alpha, std::size_t samples,
                              std::size_t max_steps, std::uint64_t seed, unsigned threads) {
  EscapeStats stats = run_experiment(epsilon, alpha, samples, max_steps, threads,
                                     [&](std::size_t n) { return escape_initial_point(epsilon, seed, n); });
  stats.seed = seed;
  return stats;
}

EscapeStats escape_experiment(double epsilon, double alpha, const std::vector<Vector>& starts,
                              std::size_t max_steps, unsigned threads) {
  for (const Vector& s : starts) require_planar(s);
  return run_experiment(epsilon, alpha, starts.size(), max_steps, threads,
                        [&](std::size_t n) { return starts[n]; });
}

bool monotone_drift_check(const Trajectory& traj) {
  if (traj.fn_id != FunctionId::cross)
    throw PreconditionViolated("monotone drift is a property of cross trajectories");
  if (traj.points.size() < 2) throw PreconditionViolated("trajectory has no steps");
  for (const Vector& x : traj.points) {
    if (x[0] == 0.0 || x[1] == 0.0)
      throw PreconditionViolated("trajectory touches x1 * x2 = 0 at (" + x.to_string() + ")");
    if (!(x[0] > 0.0))
      throw PreconditionViolated("x1 must stay positive, got (" + x.to_string() + ")");
  }
  for (std::size_t k = 1; k < traj.points.size(); ++k)
    if (!(traj.points[k][0] < traj.points[k - 1][0])) return false;
  return true;
}

}  // namespace nsdyn
