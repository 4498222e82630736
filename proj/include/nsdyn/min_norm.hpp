#pragma once

#include <span>

#include "nsdyn/vector.hpp"

namespace nsdyn {

struct MinNormResult {
  Vector point;
  std::size_t iterations = 0;
  bool converged = true;
};

/// Minimum-norm point of conv(points).
///
/// One or two points are solved in closed form (projection of the origin on
/// the segment). Larger sets run Wolfe's minimum-norm-point algorithm: a
/// corral of affinely independent points is grown by the point minimising
/// <x, p>, and the affine minimiser of the corral is pulled back into the
/// simplex when it leaves it. Stops when <x, x> - min_p <x, p> <= tol * max|p|^2
/// or after 10 * m^2 minor cycles.
MinNormResult min_norm_point(std::span<const Vector> points, double tol = 1e-12);

}  // namespace nsdyn
