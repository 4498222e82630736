#pragma once

#include <boost/container/small_vector.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsdyn/vector.hpp"

namespace nsdyn {

enum class FunctionId { quad, abs_sum, cross, wiggle, vee_bowl, neg_norm };

std::string_view to_string(FunctionId id);
/// Throws InvalidArgument for unknown names.
FunctionId parse_function_id(std::string_view name);

/// Clarke subdifferential at `point`, as the convex hull of `generators`.
struct SubdifferentialSet {
  Vector point;
  boost::container::small_vector<Vector, 2> generators;

  std::size_t size() const { return generators.size(); }
  bool is_singleton() const { return generators.size() == 1; }
};

/// Static description of a catalog entry, independent of dimension.
struct CatalogEntry {
  FunctionId id;
  std::optional<std::size_t> fixed_dim;  // nullopt: any dimension >= 1
  bool semialgebraic;
  bool convex;
  /// Constant beta of a quadratic growth bound f(x) - min f >= beta d(x, X)^2.
  std::optional<double> growth_beta;
};

/// The six entries, in a fixed order.
const std::vector<CatalogEntry>& list_catalog();
const CatalogEntry& catalog_entry(FunctionId id);

/// A catalog entry instantiated at a concrete dimension. Immutable.
class CatalogFunction {
 public:
  /// Throws DimensionMismatch if `id` has a fixed dimension other than `dim`,
  /// InvalidArgument if dim == 0.
  CatalogFunction(FunctionId id, std::size_t dim);
  /// Uses the fixed dimension of `id`, or 2 for dimension-free entries.
  explicit CatalogFunction(FunctionId id);

  FunctionId id() const { return id_; }
  std::string_view name() const { return to_string(id_); }
  std::size_t dim() const { return dim_; }
  const CatalogEntry& entry() const { return catalog_entry(id_); }
  bool semialgebraic() const { return entry().semialgebraic; }
  bool convex() const { return entry().convex; }
  std::optional<double> growth_beta() const { return entry().growth_beta; }

  /// Minimizers used for d(x, X); empty unless the function is convex.
  std::vector<Vector> known_minimizers() const;
  /// min f, when known.
  std::optional<double> minimum_value() const;

  double evaluate(const Vector& x) const;

  /// Generators of the Clarke subdifferential. A nonsmooth piece counts as
  /// active when its defining quantity has magnitude <= active_tol.
  SubdifferentialSet subdifferential(const Vector& x, double active_tol = 0.0) const;

  /// Distance to the nearest known minimizer. Throws NotConvex if none.
  double distance_to_minimizers(const Vector& x) const;

 private:
  void check_input(const Vector& x) const;

  FunctionId id_;
  std::size_t dim_;
};

/// argmin { |v| : v in conv(S.generators) }.
Vector minimal_norm_element(const SubdifferentialSet& set);

}  // namespace nsdyn
