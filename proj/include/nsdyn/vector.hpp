#pragma once

#include <boost/container/small_vector.hpp>

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace nsdyn {

/// A point of R^n. Storage is inline for n <= 4, which covers every
/// hot loop in the library without touching the heap.
class Vector {
 public:
  using Storage = boost::container::small_vector<double, 4>;

  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
  Vector(std::initializer_list<double> values) : coords_(values) {}
  explicit Vector(std::span<const double> values)
      : coords_(values.begin(), values.end()) {}

  std::size_t dim() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }

  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  std::span<const double> coords() const { return {coords_.data(), coords_.size()}; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }
  auto begin() { return coords_.begin(); }
  auto end() { return coords_.end(); }

  bool is_finite() const {
    for (double c : coords_)
      if (!std::isfinite(c)) return false;
    return true;
  }

  double squared_norm() const {
    double s = 0.0;
    for (double c : coords_) s += c * c;
    return s;
  }
  double norm() const { return std::sqrt(squared_norm()); }
  double max_abs() const {
    double m = 0.0;
    for (double c : coords_) m = std::fmax(m, std::fabs(c));
    return m;
  }

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(double a);

  friend bool operator==(const Vector& a, const Vector& b) { return a.coords_ == b.coords_; }

  /// Comma-separated coordinates, each in shortest round-trip form.
  std::string to_string() const;

 private:
  Storage coords_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector v);
double dot(const Vector& a, const Vector& b);
double distance(const Vector& a, const Vector& b);

/// Throws DimensionMismatch unless a and b have the same dimension.
void require_same_dim(const Vector& a, const Vector& b, const char* what);

}  // namespace nsdyn
