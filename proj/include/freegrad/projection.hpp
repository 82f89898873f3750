#pragma once

#include <optional>

#include "freegrad/vector.hpp"

namespace freegrad {

enum class ProjectionKind { WholeSpace, NonnegativeOrthant, Box, Ball };

// Euclidean projection onto one of four closed convex sets. A closed
// enumeration: the supported sets all admit exact closed-form projections.
class Projection {
 public:
  static Projection whole_space();
  static Projection nonnegative_orthant();
  static Projection box(Vector lower, Vector upper);
  static Projection ball(Vector center, double radius);

  ProjectionKind kind() const noexcept { return kind_; }

  Vector operator()(const Vector& x) const;

  // Set membership with additive slack `tol` (scaled by the radius for Ball).
  bool contains(const Vector& x, double tol = 1e-12) const;

  const Vector& lower() const { return *lower_; }
  const Vector& upper() const { return *upper_; }
  const Vector& center() const { return *center_; }
  double radius() const { return radius_; }

 private:
  explicit Projection(ProjectionKind kind) : kind_(kind) {}

  ProjectionKind kind_;
  std::optional<Vector> lower_;
  std::optional<Vector> upper_;
  std::optional<Vector> center_;
  double radius_ = 0.0;
};

inline Vector project(const Projection& p, const Vector& x) { return p(x); }

}  // namespace freegrad
