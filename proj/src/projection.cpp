#include "freegrad/projection.hpp"

namespace freegrad {

Projection Projection::whole_space() {
  return Projection(ProjectionKind::WholeSpace);
}

Projection Projection::nonnegative_orthant() {
  return Projection(ProjectionKind::NonnegativeOrthant);
}

Projection Projection::box(Vector lower, Vector upper) {
  require_same_dim(lower, upper, "Projection::box");
  for (std::size_t i = 0; i < lower.dim(); ++i) {
    if (lower[i] > upper[i])
      throw InvalidArgument("Projection::box: lower > upper in a coordinate");
  }
  Projection p(ProjectionKind::Box);
  p.lower_ = std::move(lower);
  p.upper_ = std::move(upper);
  return p;
}

Projection Projection::ball(Vector center, double radius) {
  if (!(radius > 0.0))
    throw InvalidArgument("Projection::ball: radius must be positive");
  Projection p(ProjectionKind::Ball);
  p.center_ = std::move(center);
  p.radius_ = radius;
  return p;
}

Vector Projection::operator()(const Vector& x) const {
  switch (kind_) {
    case ProjectionKind::WholeSpace:
      return x;
    case ProjectionKind::NonnegativeOrthant: {
      std::vector<double> out(x.dim());
      kernels::clamp_nonneg(out, x.span());
      return Vector(std::move(out));
    }
    case ProjectionKind::Box: {
      require_same_dim(x, *lower_, "Projection(Box)");
      std::vector<double> out(x.dim());
      kernels::clamp_box(out, x.span(), lower_->span(), upper_->span());
      return Vector(std::move(out));
    }
    case ProjectionKind::Ball: {
      require_same_dim(x, *center_, "Projection(Ball)");
      const double r2 = kernels::dist_sq(x.span(), center_->span());
      // Interior points (including x == center) are returned untouched.
      if (r2 <= radius_ * radius_) return x;
      const double s = radius_ / std::sqrt(r2);
      std::vector<double> out(x.dim());
      kernels::blend_toward(out, center_->span(), x.span(), s);
      return Vector(std::move(out));
    }
  }
  throw InvalidArgument("Projection: unknown kind");
}

bool Projection::contains(const Vector& x, double tol) const {
  switch (kind_) {
    case ProjectionKind::WholeSpace:
      return true;
    case ProjectionKind::NonnegativeOrthant:
      for (std::size_t i = 0; i < x.dim(); ++i)
        if (x[i] < -tol) return false;
      return true;
    case ProjectionKind::Box:
      if (x.dim() != lower_->dim()) return false;
      for (std::size_t i = 0; i < x.dim(); ++i) {
        if (x[i] < (*lower_)[i] - tol || x[i] > (*upper_)[i] + tol)
          return false;
      }
      return true;
    case ProjectionKind::Ball: {
      if (x.dim() != center_->dim()) return false;
      const double d = std::sqrt(kernels::dist_sq(x.span(), center_->span()));
      return d <= radius_ + tol * (1.0 + radius_);
    }
  }
  return false;
}

}  // namespace freegrad
