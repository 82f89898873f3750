#pragma once

#include <cmath>

#include "freegrad/problem.hpp"
#include "freegrad/step_scale.hpp"
#include "freegrad/trace.hpp"

namespace freegrad {

// Running optimizer state between iterations. t is the index of the upcoming
// iteration (1-based); k is the phase index k_{t-1}; S and Gamma_sq are the
// running sums of ||g_s||^2 and of gamma_{k_s}^2 ||g_s||^2 / h_s^2.
struct FreeState {
  long long t;
  Vector x;
  Vector x1;
  double S;
  double Gamma_sq;
  int k;
  double gamma0;
};

FreeState make_free_state(const Problem& problem, double gamma0);

enum class ThresholdKind { FullB, SimpleB, ImprovedWarmupB };

// The distance-to-initialization budget deciding whether the current gamma_k
// is large enough. FullB is the default rule; SimpleB = 3 gamma_k and
// ImprovedWarmupB = 2 gamma_k / sqrt(k) + sqrt(Gamma^2 + gamma_k^2 / T) are
// the known-L, known-T variants.
class ThresholdRule {
 public:
  static ThresholdRule full_b() { return ThresholdRule(ThresholdKind::FullB); }
  static ThresholdRule simple_b() {
    return ThresholdRule(ThresholdKind::SimpleB);
  }
  static ThresholdRule improved_warmup(long long T);

  ThresholdKind kind() const { return kind_; }
  long long horizon() const { return T_; }

 private:
  explicit ThresholdRule(ThresholdKind kind) : kind_(kind) {}

  ThresholdKind kind_;
  long long T_ = 0;
};

// gamma0 * 2^k, computed by exponent arithmetic (exact, no cumulative drift).
inline double gamma_of_k(double gamma0, int k) {
  return std::ldexp(gamma0, k);
}

double threshold(const ThresholdRule& rule, int k, double gamma0,
                 double Gamma_sq, double grad_norm_sq, double h);

// Projected trial point for phase index k; does not mutate the state.
Vector probe(const FreeState& state, const Vector& g, double h, int k,
             const Projection& projection);

struct PhaseDecision {
  int k;
  Vector x_next;
  double B;
  double dist_to_x1;
};

inline constexpr int kDefaultDoublingCap = 64;

// Smallest admissible k >= state.k together with its probe point and
// threshold. Throws DivergenceGuard past k_cap, carrying the probe history.
PhaseDecision find_k(const FreeState& state, const Vector& g, double h,
                     const ThresholdRule& rule, const Projection& projection,
                     int k_cap);

struct StepOutcome {
  FreeState state;
  TraceRecord record;
};

// One full iteration in the order: subgradient, S, h, find_k, move, Gamma^2.
StepOutcome step(const FreeState& state, const Problem& problem,
                 const StepScale& scale, const ThresholdRule& rule);

RunResult run(const Problem& problem, const StepScale& scale,
              const ThresholdRule& rule, double gamma0, long long T,
              const RunOptions& options = {});

}  // namespace freegrad
