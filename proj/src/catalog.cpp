#include "nsdyn/catalog.hpp"

#include <cmath>
#include <string>

#include "nsdyn/errors.hpp"
#include "nsdyn/min_norm.hpp"

namespace nsdyn {

namespace {

// |t|^{3/2}
inline double pow15(double a) { return a * std::sqrt(a); }

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// abs_sum at a point with m active coordinates has 2^m extreme subgradients.
constexpr std::size_t kMaxActiveCoordinates = 20;

}  // namespace

std::string_view to_string(FunctionId id) {
  switch (id) {
    case FunctionId::quad: return "quad";
    case FunctionId::abs_sum: return "abs_sum";
    case FunctionId::cross: return "cross";
    case FunctionId::wiggle: return "wiggle";
    case FunctionId::vee_bowl: return "vee_bowl";
    case FunctionId::neg_norm: return "neg_norm";
  }
  return "?";
}

FunctionId parse_function_id(std::string_view name) {
  for (const CatalogEntry& e : list_catalog())
    if (to_string(e.id) == name) return e.id;
  throw InvalidArgument("unknown function '" + std::string(name) + "'");
}

const std::vector<CatalogEntry>& list_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {FunctionId::quad, std::nullopt, true, true, 0.5},
      {FunctionId::abs_sum, std::nullopt, true, true, std::nullopt},
      {FunctionId::cross, 2, true, false, std::nullopt},
      {FunctionId::wiggle, 1, false, false, std::nullopt},
      {FunctionId::vee_bowl, 2, true, true, std::nullopt},
      {FunctionId::neg_norm, std::nullopt, true, false, std::nullopt},
  };
  return entries;
}

const CatalogEntry& catalog_entry(FunctionId id) {
  for (const CatalogEntry& e : list_catalog())
    if (e.id == id) return e;
  throw InvalidArgument("unknown function id");
}

CatalogFunction::CatalogFunction(FunctionId id, std::size_t dim) : id_(id), dim_(dim) {
  if (dim == 0) throw InvalidArgument("function dimension must be positive");
  const auto fixed = catalog_entry(id).fixed_dim;
  if (fixed && *fixed != dim)
    throw DimensionMismatch(std::string(to_string(id)) + " is defined in dimension " +
                            std::to_string(*fixed) + ", not " + std::to_string(dim));
}

CatalogFunction::CatalogFunction(FunctionId id)
    : CatalogFunction(id, catalog_entry(id).fixed_dim.value_or(2)) {}

std::vector<Vector> CatalogFunction::known_minimizers() const {
  if (!convex()) return {};
  return {Vector(dim_)};
}

std::optional<double> CatalogFunction::minimum_value() const {
  switch (id_) {
    case FunctionId::quad:
    case FunctionId::abs_sum:
    case FunctionId::vee_bowl:
    case FunctionId::cross:
      return 0.0;
    default:
      return std::nullopt;
  }
}

void CatalogFunction::check_input(const Vector& x) const {
  if (x.dim() != dim_)
    throw DimensionMismatch(std::string(name()) + " expects dimension " + std::to_string(dim_) +
                            ", got " + std::to_string(x.dim()));
  if (!x.is_finite()) throw NonFiniteInput(std::string(name()) + ": non-finite input");
}

double CatalogFunction::evaluate(const Vector& x) const {
  check_input(x);
  switch (id_) {
    case FunctionId::quad:
      return 0.5 * x.squared_norm();
    case FunctionId::abs_sum: {
      double s = 0.0;
      for (double c : x) s += std::fabs(c);
      return s;
    }
    case FunctionId::cross:
      return pow15(std::fabs(x[0])) * pow15(std::fabs(x[1]));
    case FunctionId::wiggle:
      return x[0] == 0.0 ? 0.0 : x[0] * x[0] * std::sin(1.0 / x[0]);
    case FunctionId::vee_bowl:
      return std::fabs(x[0]) + x[1] * x[1];
    case FunctionId::neg_norm:
      return -x.norm();
  }
  return 0.0;
}

SubdifferentialSet CatalogFunction::subdifferential(const Vector& x, double active_tol) const {
  check_input(x);
  if (!(active_tol >= 0.0)) throw InvalidArgument("active_tol must be nonnegative");
  SubdifferentialSet set{x, {}};
  auto& gens = set.generators;

  switch (id_) {
    case FunctionId::quad:
      gens.push_back(x);
      break;

    case FunctionId::abs_sum: {
      Vector base(dim_);
      std::vector<std::size_t> active;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (std::fabs(x[i]) <= active_tol)
          active.push_back(i);
        else
          base[i] = sign(x[i]);
      }
      if (active.size() > kMaxActiveCoordinates)
        throw InvalidArgument("abs_sum: too many active coordinates to enumerate");
      const std::size_t count = std::size_t{1} << active.size();
      for (std::size_t mask = 0; mask < count; ++mask) {
        Vector g = base;
        for (std::size_t b = 0; b < active.size(); ++b)
          g[active[b]] = (mask >> b) & 1U ? 1.0 : -1.0;
        gens.push_back(std::move(g));
      }
      break;
    }

    case FunctionId::cross: {
      // C^1 everywhere: both partials vanish on the axes.
      const double a1 = std::fabs(x[0]);
      const double a2 = std::fabs(x[1]);
      const double r1 = std::sqrt(a1);
      const double r2 = std::sqrt(a2);
      gens.push_back(Vector{1.5 * r1 * a2 * r2 * sign(x[0]), 1.5 * a1 * r1 * r2 * sign(x[1])});
      break;
    }

    case FunctionId::wiggle:
      // Clarke set at 0 is the hull of the limiting derivatives, [-1, 1].
      if (std::fabs(x[0]) <= active_tol) {
        gens.push_back(Vector{-1.0});
        gens.push_back(Vector{1.0});
      } else {
        const double inv = 1.0 / x[0];
        gens.push_back(Vector{2.0 * x[0] * std::sin(inv) - std::cos(inv)});
      }
      break;

    case FunctionId::vee_bowl:
      if (std::fabs(x[0]) <= active_tol) {
        gens.push_back(Vector{-1.0, 2.0 * x[1]});
        gens.push_back(Vector{1.0, 2.0 * x[1]});
      } else {
        gens.push_back(Vector{sign(x[0]), 2.0 * x[1]});
      }
      break;

    case FunctionId::neg_norm: {
      const double r = x.norm();
      if (r <= active_tol) {
        // The true set is the closed unit ball; its inscribed cross-polytope
        // has the same minimal-norm element (0) and the same support on the
        // coordinate axes.
        for (std::size_t i = 0; i < dim_; ++i) {
          Vector e(dim_);
          e[i] = -1.0;
          gens.push_back(e);
          e[i] = 1.0;
          gens.push_back(std::move(e));
        }
      } else {
        gens.push_back((-1.0 / r) * x);
      }
      break;
    }
  }
  return set;
}

double CatalogFunction::distance_to_minimizers(const Vector& x) const {
  const auto mins = known_minimizers();
  if (mins.empty()) throw NotConvex(std::string(name()) + " has no registered minimizers");
  double best = distance(x, mins.front());
  for (const Vector& m : mins) best = std::min(best, distance(x, m));
  return best;
}

Vector minimal_norm_element(const SubdifferentialSet& set) {
  if (set.is_singleton()) return set.generators.front();
  return min_norm_point({set.generators.data(), set.generators.size()}).point;
}

}  // namespace nsdyn
