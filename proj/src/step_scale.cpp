#include "freegrad/step_scale.hpp"

#include <cmath>

#include "freegrad/errors.hpp"

namespace freegrad {

double h_main(double S) {
  if (!(S >= 0.0) || !std::isfinite(S))
    throw InvalidArgument("h_main: S must be finite and >= 0");
  return std::sqrt((S + 1.0) * (1.0 + std::log(1.0 + S)));
}

double h_sqrt(double S) {
  if (!(S >= 0.0) || !std::isfinite(S))
    throw InvalidArgument("h_sqrt: S must be finite and >= 0");
  if (S == 0.0)
    throw UndefinedScale("h_sqrt: scale undefined at S = 0 (zero first gradient)");
  return std::sqrt(S);
}

double h_eps(double S, double epsilon) {
  if (!(epsilon > 0.0))
    throw InvalidArgument("h_eps: epsilon must be positive");
  if (!(S >= 0.0) || !std::isfinite(S))
    throw InvalidArgument("h_eps: S must be finite and >= 0");
  return std::sqrt(epsilon + S);
}

double ell_T(long long T, double delta) {
  if (T < 1) throw InvalidArgument("ell_T: T must be >= 1");
  if (!(delta > 0.0) || delta > 1.0)
    throw InvalidArgument("ell_T: delta must be in (0, 1]");
  const double v = std::log(std::log2(2.0 * static_cast<double>(T)) / delta);
  return v > 1.0 ? v : 1.0;
}

double h_stochastic(double L, long long T, double delta, int k_prev) {
  if (!(L > 0.0)) throw InvalidArgument("h_stochastic: L must be positive");
  if (k_prev < 1) throw InvalidArgument("h_stochastic: k_prev must be >= 1");
  const double shrink = (1.0 + k_prev) * (1.0 + k_prev);
  return L * std::sqrt(static_cast<double>(T) * ell_T(T, delta / shrink));
}

StepScale StepScale::sqrt_eps(double epsilon) {
  if (!(epsilon > 0.0))
    throw InvalidArgument("StepScale::sqrt_eps: epsilon must be positive");
  StepScale s(StepScaleKind::SqrtEpsS);
  s.epsilon_ = epsilon;
  return s;
}

StepScale StepScale::const_lt(double L, long long T) {
  if (!(L > 0.0) || T < 1)
    throw InvalidArgument("StepScale::const_lt: need L > 0 and T >= 1");
  StepScale s(StepScaleKind::ConstLT);
  s.L_ = L;
  s.T_ = T;
  return s;
}

StepScale StepScale::stochastic_lt(double L, long long T, double delta) {
  if (!(L > 0.0) || T < 1 || !(delta > 0.0) || delta >= 1.0)
    throw InvalidArgument(
        "StepScale::stochastic_lt: need L > 0, T >= 1, delta in (0, 1)");
  StepScale s(StepScaleKind::StochasticLT);
  s.L_ = L;
  s.T_ = T;
  s.delta_ = delta;
  return s;
}

double StepScale::h(double S, int k_prev) const {
  switch (kind_) {
    case StepScaleKind::MainH:
      return h_main(S);
    case StepScaleKind::SqrtS:
      return h_sqrt(S);
    case StepScaleKind::SqrtEpsS:
      return h_eps(S, epsilon_);
    case StepScaleKind::ConstLT:
      return L_ * std::sqrt(static_cast<double>(T_));
    case StepScaleKind::StochasticLT:
      return h_stochastic(L_, T_, delta_, k_prev);
  }
  throw InvalidArgument("StepScale: unknown kind");
}

const char* step_scale_name(StepScaleKind kind) {
  switch (kind) {
    case StepScaleKind::MainH:
      return "main_h";
    case StepScaleKind::SqrtS:
      return "sqrt_s";
    case StepScaleKind::SqrtEpsS:
      return "sqrt_eps";
    case StepScaleKind::ConstLT:
      return "const_lt";
    case StepScaleKind::StochasticLT:
      return "stochastic_lt";
  }
  return "?";
}

}  // namespace freegrad
