#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "freegrad/problem.hpp"
#include "freegrad/rng.hpp"
#include "freegrad/trace.hpp"

namespace freegrad {

// Stochastic first-order oracle: draws one subgradient of F(., xi) at x.
// Samples must satisfy ||g|| <= L almost surely; every draw is checked.
struct StochasticOracle {
  std::function<Vector(const Vector&, Rng&)> sample_subgrad;
  double L = 0.0;
  std::optional<Objective> true_objective;
};

struct StochasticConfig {
  double gamma0 = 1.0;
  double L = 0.0;
  long long T = 0;
  double delta = 0.0;
};

// Stochastic projected subgradient descent with the fixed acceptance budget
// 38 gamma_k and h_t = L sqrt(T ell_T(delta / (1 + k_{t-1})^2)). The trace
// records the true objective value at each iterate; regret is measured
// against f, not against sampled values.
RunResult run_stochastic(const Problem& problem, const StochasticOracle& oracle,
                         const StochasticConfig& config, std::uint64_t seed,
                         std::uint64_t stream = 0,
                         const RunOptions& options = {});

// Built-in stochastic test problem: f(x) = E|<a, x> - xi| with xi uniform on
// [-sigma, sigma]. Closed forms: f(x) = phi(<a, x>) with
// phi(u) = (u^2 + sigma^2) / (2 sigma) for |u| <= sigma and |u| otherwise,
// minimized at x* = 0 with f* = sigma / 2; the sampled subgradient
// a sign(<a, x> - xi) is ||a||-Lipschitz almost surely.
struct NoisySign {
  Problem problem;
  StochasticOracle oracle;
  Vector a;  // the fixed direction defining <a, x>
  double sigma;
};

NoisySign make_noisy_sign(std::size_t dim, double sigma,
                          std::uint64_t data_seed, std::uint64_t init_seed);

}  // namespace freegrad
