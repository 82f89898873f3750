#pragma once

#include <cmath>
#include <vector>

#include "freegrad/rng.hpp"
#include "freegrad/vector.hpp"

namespace testutil {

inline std::vector<double> random_entries(freegrad::Rng& rng, std::size_t dim,
                                          double lo, double hi) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline freegrad::Vector random_vector(freegrad::Rng& rng, std::size_t dim,
                                      double lo = -1.0, double hi = 1.0) {
  return freegrad::Vector(random_entries(rng, dim, lo, hi));
}

inline bool close(double a, double b, double rel, double abs = 0.0) {
  return std::fabs(a - b) <= abs + rel * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace testutil
