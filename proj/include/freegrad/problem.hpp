#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "freegrad/projection.hpp"
#include "freegrad/vector.hpp"

namespace freegrad {

// First-order oracle pair for a convex function. `fused` optionally returns
// value and subgradient from one pass; problems whose two oracles share work
// (e.g. a matrix-vector product) should provide it.
struct Objective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> subgrad;
  std::function<std::pair<double, Vector>(const Vector&)> fused;
  std::optional<double> lipschitz_bound;
};

struct Evaluation {
  double value;
  Vector subgrad;
};

// A constrained minimization instance: oracles, feasible set, start point and
// (when known) a minimizer with its value, used by the bound certifiers.
class Problem {
 public:
  Problem(Objective objective, Projection constraint, Vector x1,
          std::optional<Vector> known_minimizer = std::nullopt,
          std::optional<double> known_f_star = std::nullopt);

  const Objective& objective() const { return objective_; }
  const Projection& constraint() const { return constraint_; }
  const Vector& x1() const { return x1_; }
  const std::optional<Vector>& known_minimizer() const {
    return known_minimizer_;
  }
  const std::optional<double>& known_f_star() const { return known_f_star_; }

  std::size_t dim() const { return x1_.dim(); }

 private:
  Objective objective_;
  Projection constraint_;
  Vector x1_;
  std::optional<Vector> known_minimizer_;
  std::optional<double> known_f_star_;
};

// Queries both oracles at x (through the fused path when available).
Evaluation evaluate(const Problem& problem, const Vector& x);

}  // namespace freegrad
