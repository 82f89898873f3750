#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freegrad/problem.hpp"

namespace freegrad {

enum class Family { Norm1, Norm2, AbsLinear, ExpSum };

const char* family_name(Family family);
std::optional<Family> parse_family(const std::string& name);

// Seeded description of a benchmark instance. AbsLinear rows are i.i.d.
// standard Gaussian from data_seed; the ExpSum instance uses 5 centers drawn
// from U[0,1]^dim (data_seed) with unit sigmas. The start point is
// U[-1,1]^dim from init_seed (U[0,1]^dim for ExpSum, whose feasible set is
// the nonnegative orthant).
struct ProblemSpec {
  Family family = Family::Norm2;
  std::size_t dim = 1;
  std::size_t n = 0;  // AbsLinear rows
  std::uint64_t data_seed = 0;
  std::uint64_t init_seed = 0;
};

Problem build(const ProblemSpec& spec);

// Euclidean-norm Lipschitz constants: sqrt(dim) for Norm1, 1 for Norm2,
// mean row norm for AbsLinear; absent for ExpSum (not globally Lipschitz).
std::optional<double> lipschitz_bound(const ProblemSpec& spec);

double expsum_value(const Vector& x, const std::vector<Vector>& centers,
                    const std::vector<double>& sigmas);

// sum_i exp(||x - a_i|| / s_i) (x - a_i) / (s_i ||x - a_i||), with the i-th
// term replaced by zero when x == a_i (a valid subgradient at the kink).
Vector expsum_subgrad(const Vector& x, const std::vector<Vector>& centers,
                      const std::vector<double>& sigmas);

// The seeded ExpSum instance parameters, exposed for tests.
struct ExpSumInstance {
  std::vector<Vector> centers;
  std::vector<double> sigmas;
};
ExpSumInstance expsum_instance(std::size_t dim, std::uint64_t data_seed);

// Row-major n x dim Gaussian matrix of the AbsLinear instance; regeneration
// from the same data_seed is bit-identical.
std::vector<double> abslinear_rows(std::size_t n, std::size_t dim,
                                   std::uint64_t data_seed);

}  // namespace freegrad
