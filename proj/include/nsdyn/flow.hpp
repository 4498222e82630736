#pragma once

#include <cstddef>
#include <vector>

#include "nsdyn/catalog.hpp"
#include "nsdyn/engine.hpp"
#include "nsdyn/vector.hpp"

namespace nsdyn {

/// Fixed-step approximation of the subgradient flow x' in -df(x) on [0, T],
/// using the minimal-norm element at every node.
struct FlowSolution {
  FunctionId fn_id = FunctionId::quad;
  Vector x0;
  double horizon = 0.0;
  double step = 0.0;
  std::vector<double> times;  // j*h, plus T when T is not a multiple of h
  std::vector<Vector> nodes;
  std::vector<Vector> min_norm_subgradients;
  std::vector<double> f_values;

  /// Linear interpolation between nodes; t must lie in [0, horizon].
  Vector at(double t) const;
  /// Largest minimal-norm subgradient norm seen along the solution.
  double observed_lipschitz() const;
  /// True when f never increases by more than `tol` between consecutive nodes.
  bool monotone_within(double tol) const;
};

/// Explicit scheme x_{j+1} = x_j - h_j * argmin{|v| : v in df(x_j)}.
/// Throws NonFiniteState if the state leaves the finite range.
FlowSolution integrate_flow(const CatalogFunction& fn, const Vector& x0, double horizon,
                            double h);

/// |f(x(T)) - f(x(0)) + Q| where Q is the trapezoidal rule applied to the
/// squared minimal-norm subgradient norms at the nodes.
double energy_residual(const CatalogFunction& fn, const FlowSolution& sol);

/// Flow of 0.5|x|^2: x0 * exp(-t).
Vector exact_flow_quadratic(const Vector& x0, double t);

struct DeviationReport {
  double alpha = 0.0;
  double step = 0.0;
  double sup_dev = 0.0;
  double t_argmax = 0.0;
};

/// max |xbar(t) - x(t)| over the union of both node grids. Both curves are
/// piecewise linear, so this is the supremum over the common horizon.
/// Throws HorizonMismatch unless the path and flow share the same horizon.
DeviationReport sup_deviation(const InterpolatedPath& path, const FlowSolution& sol);

}  // namespace nsdyn
