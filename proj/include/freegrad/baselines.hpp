#pragma once

#include <optional>

#include "freegrad/problem.hpp"
#include "freegrad/trace.hpp"

namespace freegrad {

// Parameters of the two comparison methods: D is ||x1 - x*|| (or an upper
// bound on it); the Oracle variant additionally needs L and T.
struct BaselineConfig {
  double D = 0.0;
  std::optional<double> L;
  std::optional<long long> T;
};

// AdaGrad with known distance: eta_t = D / sqrt(S_t). Iterations before the
// first nonzero gradient perform no step.
RunResult run_adagrad(const Problem& problem, double D, long long T,
                      const RunOptions& options = {});

// Constant oracle step eta = D / (L sqrt(T)).
RunResult run_oracle(const Problem& problem, double D, double L, long long T,
                     const RunOptions& options = {});

RunResult run_adagrad(const Problem& problem, const BaselineConfig& config,
                      long long T, const RunOptions& options = {});

// Requires config.L and config.T.
RunResult run_oracle(const Problem& problem, const BaselineConfig& config,
                     const RunOptions& options = {});

}  // namespace freegrad
