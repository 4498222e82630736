#include "nsdyn/vector.hpp"

#include "nsdyn/errors.hpp"
#include "nsdyn/format.hpp"

namespace nsdyn {

Vector& Vector::operator+=(const Vector& o) {
  require_same_dim(*this, o, "vector addition");
  for (std::size_t i = 0; i < dim(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  require_same_dim(*this, o, "vector subtraction");
  for (std::size_t i = 0; i < dim(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

Vector& Vector::operator*=(double a) {
  for (double& c : coords_) c *= a;
  return *this;
}

std::string Vector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) out += ',';
    out += format_real(coords_[i]);
  }
  return out;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector v) { return v *= s; }

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dot product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double distance(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a.dim()) +
                            " and " + std::to_string(b.dim()) + " differ");
}

}  // namespace nsdyn
