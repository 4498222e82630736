#include "nsdyn/engine.hpp"

#include <charconv>
#include <cmath>

#include "nsdyn/errors.hpp"

namespace nsdyn {

std::string SelectionPolicy::to_string() const {
  switch (kind) {
    case Kind::minimal_norm: return "minimal_norm";
    case Kind::random_extreme: return "random_extreme";
    case Kind::fixed_index: return "fixed_index:" + std::to_string(index);
  }
  return "?";
}

SelectionPolicy SelectionPolicy::parse(std::string_view text) {
  if (text == "minimal_norm") return minimal_norm();
  if (text == "random_extreme") return random_extreme();
  constexpr std::string_view prefix = "fixed_index:";
  if (text.starts_with(prefix)) {
    std::string_view digits = text.substr(prefix.size());
    std::size_t i = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty())
      return fixed(i);
  }
  throw InvalidArgument("unknown selection policy '" + std::string(text) + "'");
}

Vector select_subgradient(const SubdifferentialSet& set, const SelectionPolicy& policy,
                          Rng& rng) {
  switch (policy.kind) {
    case SelectionPolicy::Kind::minimal_norm:
      return minimal_norm_element(set);
    case SelectionPolicy::Kind::random_extreme:
      return set.generators[rng.below(set.size())];
    case SelectionPolicy::Kind::fixed_index:
      return set.generators[policy.index % set.size()];
  }
  return set.generators.front();
}

StepResult step(const CatalogFunction& fn, const Vector& x, double alpha,
                const SelectionPolicy& policy, Rng& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("step size must be positive and finite");
  const SubdifferentialSet set = fn.subdifferential(x, 0.0);
  StepResult r{Vector(x.dim()), select_subgradient(set, policy, rng), false};
  for (std::size_t i = 0; i < r.next.dim(); ++i) {
    r.next[i] = x[i] - alpha * r.subgradient[i];
    if (!(std::fabs(r.next[i]) <= kDivergenceThreshold)) r.diverged = true;
  }
  return r;
}

Trajectory run(const CatalogFunction& fn, const Vector& x0, double alpha, std::size_t steps,
               const SelectionPolicy& policy, std::uint64_t seed, const std::optional<Ball>& stop) {
  if (x0.dim() != fn.dim())
    throw DimensionMismatch("initial point has dimension " + std::to_string(x0.dim()) +
                            ", function expects " + std::to_string(fn.dim()));
  if (!x0.is_finite()) throw NonFiniteInput("initial point is not finite");

  Trajectory traj;
  traj.fn_id = fn.id();
  traj.alpha = alpha;
  traj.policy = policy;
  traj.seed = seed;
  traj.points.reserve(steps + 1);
  traj.chosen_subgradients.reserve(steps);
  traj.points.push_back(x0);
  if (stop && !stop->contains(x0)) return traj;

  Rng rng(seed);
  for (std::size_t k = 0; k < steps; ++k) {
    StepResult r = step(fn, traj.points.back(), alpha, policy, rng);
    traj.points.push_back(std::move(r.next));
    traj.chosen_subgradients.push_back(std::move(r.subgradient));
    if (r.diverged) {
      traj.diverged_at = traj.points.size() - 1;
      break;
    }
    if (stop && !stop->contains(traj.points.back())) break;
  }
  return traj;
}

ExitScan scan_for_exit(const CatalogFunction& fn, const Vector& x0, double alpha,
                       std::size_t steps, const SelectionPolicy& policy, std::uint64_t seed,
                       const Ball& ball) {
  if (x0.dim() != fn.dim())
    throw DimensionMismatch("initial point dimension does not match function");
  ExitScan scan;
  scan.last = x0;
  if (!ball.contains(x0)) {
    scan.exit_index = 0;
    return scan;
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < steps; ++k) {
    StepResult r = step(fn, scan.last, alpha, policy, rng);
    scan.last = std::move(r.next);
    scan.steps_taken = k + 1;
    if (r.diverged) {
      scan.diverged = true;
      scan.exit_index = k + 1;
      return scan;
    }
    if (!ball.contains(scan.last)) {
      scan.exit_index = k + 1;
      return scan;
    }
  }
  return scan;
}

std::optional<std::size_t> first_exit(const Trajectory& traj, const Vector& center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  for (std::size_t k = 0; k < traj.points.size(); ++k)
    if (distance(traj.points[k], center) > radius) return k;
  return std::nullopt;
}

InterpolatedPath::InterpolatedPath(Trajectory trajectory, double horizon)
    : traj_(std::move(trajectory)), horizon_(horizon) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (traj_.points.empty()) throw InvalidArgument("trajectory has no points");
  end_ = std::min(horizon_, traj_.alpha * static_cast<double>(traj_.steps()));
}

std::vector<double> InterpolatedPath::node_times() const {
  std::vector<double> t;
  for (std::size_t k = 0; k <= traj_.steps(); ++k) {
    const double tk = traj_.alpha * static_cast<double>(k);
    if (tk > end_) break;
    t.push_back(tk);
  }
  if (t.back() < end_) t.push_back(end_);
  return t;
}

Vector InterpolatedPath::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, end_);
  if (!(t >= 0.0) || t > end_ + slack)
    throw OutOfHorizon("t = " + std::to_string(t) + " outside [0, " + std::to_string(end_) + "]");
  t = std::min(t, end_);
  const double alpha = traj_.alpha;
  const std::size_t last = traj_.steps();
  std::size_t k = static_cast<std::size_t>(std::floor(t / alpha));
  // Correct for rounding in t / alpha so that t == alpha*k maps to node k.
  while (k > 0 && alpha * static_cast<double>(k) > t) --k;
  while (k < last && alpha * static_cast<double>(k + 1) <= t) ++k;
  if (k >= last) return traj_.points[last];
  const double tk = alpha * static_cast<double>(k);
  if (t == tk) return traj_.points[k];
  const double w = (t - tk) / alpha;
  const Vector& a = traj_.points[k];
  const Vector& b = traj_.points[k + 1];
  Vector x = a;
  for (std::size_t i = 0; i < x.dim(); ++i) x[i] += w * (b[i] - a[i]);
  return x;
}

Vector interpolate(const InterpolatedPath& path, double t) { return path.at(t); }

}  // namespace nsdyn
