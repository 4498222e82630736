#include "nsdyn/min_norm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nsdyn/errors.hpp"

namespace nsdyn {

namespace {

Vector combine(std::span<const Vector> points, const std::vector<std::size_t>& idx,
               const std::vector<double>& w) {
  Vector x(points[idx[0]].dim());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const Vector& p = points[idx[k]];
    for (std::size_t d = 0; d < x.dim(); ++d) x[d] += w[k] * p[d];
  }
  return x;
}

// Weights mu (summing to one) of the point of aff{p_idx} closest to the
// origin, from the KKT system [G 1; 1^T 0][mu; nu] = [0; 1].
// Returns false when the corral is affinely dependent to working precision.
bool affine_minimizer(std::span<const Vector> points, const std::vector<std::size_t>& idx,
                      std::vector<double>& mu) {
  const std::size_t m = idx.size();
  const std::size_t n = m + 1;
  std::vector<double> a(n * n, 0.0);
  std::vector<double> b(n, 0.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      a[i * n + j] = dot(points[idx[i]], points[idx[j]]);
      scale = std::max(scale, std::fabs(a[i * n + j]));
    }
    a[i * n + m] = 1.0;
    a[m * n + i] = 1.0;
  }
  b[m] = 1.0;
  const double pivot_floor = 1e-14 * std::max(scale, 1.0);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (std::fabs(a[piv * n + col]) < pivot_floor) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> sol(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * sol[c];
    sol[i] = s / a[i * n + i];
  }
  mu.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(m));
  return true;
}

}  // namespace

MinNormResult min_norm_point(std::span<const Vector> points, double tol) {
  if (points.empty()) throw InvalidArgument("min_norm_point: empty point set");
  for (const Vector& p : points) require_same_dim(points[0], p, "min_norm_point");

  if (points.size() == 1) return {points[0], 0, true};
  if (points.size() == 2) {
    const Vector& a = points[0];
    const Vector d = points[1] - a;
    const double dd = d.squared_norm();
    if (dd == 0.0) return {a, 0, true};
    const double lambda = std::clamp(-dot(a, d) / dd, 0.0, 1.0);
    if (lambda == 1.0) return {points[1], 0, true};
    Vector x = a;
    for (std::size_t i = 0; i < x.dim(); ++i) x[i] += lambda * d[i];
    return {x, 0, true};
  }

  const std::size_t m = points.size();
  double max_sq = 0.0;
  std::size_t start = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double sq = points[j].squared_norm();
    max_sq = std::max(max_sq, sq);
    if (sq < points[start].squared_norm()) start = j;
  }

  std::vector<std::size_t> corral{start};
  std::vector<double> weights{1.0};
  Vector x = points[start];
  const std::size_t cap = 10 * m * m;
  std::size_t minor = 0;
  std::vector<double> mu;

  for (;;) {
    std::size_t best = 0;
    double best_val = dot(x, points[0]);
    for (std::size_t j = 1; j < m; ++j) {
      const double v = dot(x, points[j]);
      if (v < best_val) {
        best_val = v;
        best = j;
      }
    }
    if (x.squared_norm() - best_val <= tol * max_sq) break;
    if (std::find(corral.begin(), corral.end(), best) != corral.end()) break;
    corral.push_back(best);
    weights.push_back(0.0);

    for (;;) {
      if (++minor > cap) return {x, minor, false};
      if (!affine_minimizer(points, corral, mu)) {
        // The new point is affinely dependent on the corral: x is optimal to
        // working precision.
        corral.pop_back();
        weights.pop_back();
        return {x, minor, true};
      }
      if (std::all_of(mu.begin(), mu.end(), [](double v) { return v > 0.0; })) {
        weights = mu;
        x = combine(points, corral, weights);
        break;
      }
      double theta = 1.0;
      for (std::size_t k = 0; k < mu.size(); ++k)
        if (mu[k] <= 0.0) theta = std::min(theta, weights[k] / (weights[k] - mu[k]));
      for (std::size_t k = 0; k < mu.size(); ++k)
        weights[k] = (1.0 - theta) * weights[k] + theta * mu[k];
      // Drop every point whose weight reached zero; at least one always does.
      std::size_t drop = 0;
      for (std::size_t k = 1; k < weights.size(); ++k)
        if (weights[k] < weights[drop]) drop = k;
      weights[drop] = 0.0;
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_w;
      for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] > 0.0) {
          keep_idx.push_back(corral[k]);
          keep_w.push_back(weights[k]);
        }
      }
      corral = std::move(keep_idx);
      weights = std::move(keep_w);
      double total = 0.0;
      for (double w : weights) total += w;
      for (double& w : weights) w /= total;
      x = combine(points, corral, weights);
    }
  }
  return {x, minor, true};
}

}  // namespace nsdyn
