#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "freegrad/errors.hpp"
#include "freegrad/kernels.hpp"

namespace freegrad {

// Dense finite-valued vector. Construction rejects NaN/Inf and zero dimension,
// so every iterate, subgradient and probe point flowing through an optimizer
// is known to be finite.
class Vector {
 public:
  explicit Vector(std::vector<double> entries) : v_(std::move(entries)) {
    if (v_.empty()) throw InvalidArgument("Vector: dim must be >= 1");
    for (double x : v_) {
      if (!std::isfinite(x))
        throw InvalidArgument("Vector: entries must be finite");
    }
  }

  static Vector zeros(std::size_t dim) {
    return Vector(std::vector<double>(dim, 0.0));
  }

  std::size_t dim() const noexcept { return v_.size(); }
  double operator[](std::size_t i) const noexcept { return v_[i]; }
  std::span<const double> span() const noexcept { return v_; }
  const std::vector<double>& entries() const noexcept { return v_; }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> v_;
};

inline void require_same_dim(const Vector& a, const Vector& b,
                             const char* who) {
  if (a.dim() != b.dim())
    throw InvalidArgument(std::string(who) + ": dimension mismatch");
}

inline double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dot");
  return kernels::dot(a.span(), b.span());
}

inline double norm_sq(const Vector& a) { return kernels::nrm2_sq(a.span()); }

inline double norm(const Vector& a) { return std::sqrt(norm_sq(a)); }

inline double dist(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dist");
  return std::sqrt(kernels::dist_sq(a.span(), b.span()));
}

// x - eta * g, validated finite by Vector's constructor.
inline Vector step_point(const Vector& x, double eta, const Vector& g) {
  require_same_dim(x, g, "step_point");
  std::vector<double> out(x.dim());
  kernels::step_into(out, x.span(), eta, g.span());
  return Vector(std::move(out));
}

inline Vector scaled(const Vector& x, double s) {
  std::vector<double> out(x.entries());
  for (double& v : out) v *= s;
  return Vector(std::move(out));
}

}  // namespace freegrad
