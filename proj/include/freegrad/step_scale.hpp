#pragma once

#include <cstdint>

namespace freegrad {

// h(S) = sqrt((S+1) * (1 + log(1+S))), i.e. sqrt((S+1) log(e(1+S))).
double h_main(double S);

// h(S) = sqrt(S); requires S > 0 (the first gradient must be nonzero).
double h_sqrt(double S);

// h(S) = sqrt(epsilon + S)
double h_eps(double S, double epsilon);

// max(1, log(log2(2T) / delta))
double ell_T(long long T, double delta);

// L * sqrt(T * ell_T(delta / (1 + k_prev)^2))
double h_stochastic(double L, long long T, double delta, int k_prev);

enum class StepScaleKind { MainH, SqrtS, SqrtEpsS, ConstLT, StochasticLT };

// The non-decreasing positive sequence h_t feeding the step eta_t = gamma_k / h_t.
// Evaluated from the running gradient mass S_t and, for the stochastic rule,
// the previous phase index.
class StepScale {
 public:
  static StepScale main_h() { return StepScale(StepScaleKind::MainH); }
  static StepScale sqrt_s() { return StepScale(StepScaleKind::SqrtS); }
  static StepScale sqrt_eps(double epsilon);
  static StepScale const_lt(double L, long long T);
  static StepScale stochastic_lt(double L, long long T, double delta);

  StepScaleKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  double lipschitz() const { return L_; }
  long long horizon() const { return T_; }
  double delta() const { return delta_; }

  double h(double S, int k_prev) const;

 private:
  explicit StepScale(StepScaleKind kind) : kind_(kind) {}

  StepScaleKind kind_;
  double epsilon_ = 0.0;
  double L_ = 0.0;
  long long T_ = 0;
  double delta_ = 0.0;
};

const char* step_scale_name(StepScaleKind kind);

}  // namespace freegrad
