#include "freegrad/problem.hpp"

namespace freegrad {

Problem::Problem(Objective objective, Projection constraint, Vector x1,
                 std::optional<Vector> known_minimizer,
                 std::optional<double> known_f_star)
    : objective_(std::move(objective)),
      constraint_(std::move(constraint)),
      x1_(std::move(x1)),
      known_minimizer_(std::move(known_minimizer)),
      known_f_star_(std::move(known_f_star)) {
  if (!objective_.value || !objective_.subgrad)
    throw InvalidArgument("Problem: objective oracles must be set");
  if (!constraint_.contains(x1_))
    throw InvalidArgument("Problem: x1 must lie in the constraint set");
  if (known_minimizer_) {
    if (known_minimizer_->dim() != x1_.dim())
      throw InvalidArgument("Problem: known_minimizer dimension mismatch");
    if (!constraint_.contains(*known_minimizer_))
      throw InvalidArgument(
          "Problem: known_minimizer must lie in the constraint set");
    if (known_f_star_) {
      const double fx = objective_.value(*known_minimizer_);
      if (std::fabs(fx - *known_f_star_) > 1e-10)
        throw InvalidArgument(
            "Problem: objective(known_minimizer) != known_f_star");
    }
  }
}

Evaluation evaluate(const Problem& problem, const Vector& x) {
  if (x.dim() != problem.dim())
    throw InvalidArgument("evaluate: dimension mismatch");
  const Objective& obj = problem.objective();
  if (obj.fused) {
    auto [value, g] = obj.fused(x);
    if (g.dim() != x.dim())
      throw InvalidArgument("evaluate: subgradient dimension mismatch");
    return Evaluation{value, std::move(g)};
  }
  Vector g = obj.subgrad(x);
  if (g.dim() != x.dim())
    throw InvalidArgument("evaluate: subgradient dimension mismatch");
  return Evaluation{obj.value(x), std::move(g)};
}

}  // namespace freegrad
