#include "nsdyn/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsdyn/errors.hpp"

namespace nsdyn {

Vector FlowSolution::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, horizon);
  if (!(t >= 0.0) || t > horizon + slack) throw OutOfHorizon("flow evaluated outside [0, T]");
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.end()) return nodes.back();
  const std::size_t j = static_cast<std::size_t>(it - times.begin()) - 1;
  if (t == times[j]) return nodes[j];
  const double w = (t - times[j]) / (times[j + 1] - times[j]);
  Vector x = nodes[j];
  for (std::size_t i = 0; i < x.dim(); ++i) x[i] += w * (nodes[j + 1][i] - nodes[j][i]);
  return x;
}

double FlowSolution::observed_lipschitz() const {
  double l = 0.0;
  for (const Vector& g : min_norm_subgradients) l = std::max(l, g.norm());
  return l;
}

bool FlowSolution::monotone_within(double tol) const {
  for (std::size_t j = 1; j < f_values.size(); ++j)
    if (f_values[j] > f_values[j - 1] + tol) return false;
  return true;
}

FlowSolution integrate_flow(const CatalogFunction& fn, const Vector& x0, double horizon,
                            double h) {
  if (!(h > 0.0) || !(h <= horizon) || !std::isfinite(horizon))
    throw InvalidArgument("integrate_flow requires 0 < h <= T");
  if (x0.dim() != fn.dim()) throw DimensionMismatch("initial point dimension does not match");
  if (!x0.is_finite()) throw NonFiniteInput("initial point is not finite");

  FlowSolution sol;
  sol.fn_id = fn.id();
  sol.x0 = x0;
  sol.horizon = horizon;
  sol.step = h;

  // Full steps of length h; a final short step lands exactly on T.
  std::size_t full = static_cast<std::size_t>(std::floor(horizon / h));
  while (full > 0 && h * static_cast<double>(full) > horizon) --full;
  std::vector<double>& times = sol.times;
  times.reserve(full + 2);
  for (std::size_t j = 0; j <= full; ++j) times.push_back(h * static_cast<double>(j));
  if (horizon - times.back() > 1e-12 * horizon)
    times.push_back(horizon);
  else
    times.back() = horizon;

  sol.nodes.reserve(times.size());
  sol.min_norm_subgradients.reserve(times.size());
  sol.f_values.reserve(times.size());

  Vector x = x0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    Vector g = minimal_norm_element(fn.subdifferential(x, 0.0));
    sol.f_values.push_back(fn.evaluate(x));
    sol.nodes.push_back(x);
    if (j + 1 < times.size()) {
      const double dt = times[j + 1] - times[j];
      for (std::size_t i = 0; i < x.dim(); ++i) x[i] -= dt * g[i];
      if (!(x.max_abs() <= kDivergenceThreshold))
        throw NonFiniteState("flow diverged at t = " + std::to_string(times[j + 1]));
    }
    sol.min_norm_subgradients.push_back(std::move(g));
  }
  return sol;
}

double energy_residual(const CatalogFunction& fn, const FlowSolution& sol) {
  if (sol.fn_id != fn.id()) throw InvalidArgument("flow solution belongs to another function");
  double q = 0.0;
  for (std::size_t j = 0; j + 1 < sol.times.size(); ++j) {
    const double dt = sol.times[j + 1] - sol.times[j];
    q += 0.5 * dt *
         (sol.min_norm_subgradients[j].squared_norm() +
          sol.min_norm_subgradients[j + 1].squared_norm());
  }
  return std::fabs(sol.f_values.back() - sol.f_values.front() + q);
}

Vector exact_flow_quadratic(const Vector& x0, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("time must be nonnegative");
  return std::exp(-t) * x0;
}

DeviationReport sup_deviation(const InterpolatedPath& path, const FlowSolution& sol) {
  const double common = path.end_time();
  if (std::fabs(common - sol.horizon) > 1e-9 * std::max(1.0, sol.horizon))
    throw HorizonMismatch("interpolated path ends at " + std::to_string(common) +
                          " but the flow ends at " + std::to_string(sol.horizon));

  std::vector<double> grid = path.node_times();
  for (double t : sol.times)
    if (t <= common) grid.push_back(t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  DeviationReport rep{path.trajectory().alpha, sol.step, 0.0, 0.0};
  for (double t : grid) {
    const double d = distance(path.at(t), sol.at(std::min(t, sol.horizon)));
    if (d > rep.sup_dev) {
      rep.sup_dev = d;
      rep.t_argmax = t;
    }
  }
  return rep;
}

}  // namespace nsdyn
