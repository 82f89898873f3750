#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace freegrad {

// Malformed input: dimension mismatch, out-of-domain parameter, empty trace.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A scale rule that needs a nonzero first gradient was queried at S = 0
// (h = sqrt(S) has no value there).
struct UndefinedScale : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One rejected probe, kept for post-mortem when the doubling loop trips its cap.
struct ProbeAttempt {
  int k = 0;
  double dist_to_x1 = 0.0;
  double threshold = 0.0;
};

// The step-size doubling loop exceeded its cap. Theory guarantees a finite
// k_t, so reaching this means a bug or a violated precondition.
struct DivergenceGuard : std::runtime_error {
  std::vector<ProbeAttempt> history;

  DivergenceGuard(const std::string& what, std::vector<ProbeAttempt> attempts)
      : std::runtime_error(what), history(std::move(attempts)) {}
};

// A certified inequality failed numerically; names the lemma that broke.
struct PropertyFailure : std::runtime_error {
  std::string lemma;

  PropertyFailure(std::string lemma_name, const std::string& what)
      : std::runtime_error(what), lemma(std::move(lemma_name)) {}
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace freegrad
