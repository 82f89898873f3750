#include "freegrad/free_adagrad.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace freegrad {

FreeState make_free_state(const Problem& problem, double gamma0) {
  if (!(gamma0 > 0.0))
    throw InvalidArgument("make_free_state: gamma0 must be positive");
  return FreeState{1, problem.x1(), problem.x1(), 0.0, 0.0, 1, gamma0};
}

ThresholdRule ThresholdRule::improved_warmup(long long T) {
  if (T < 1)
    throw InvalidArgument("ThresholdRule::improved_warmup: T must be >= 1");
  ThresholdRule r(ThresholdKind::ImprovedWarmupB);
  r.T_ = T;
  return r;
}

double threshold(const ThresholdRule& rule, int k, double gamma0,
                 double Gamma_sq, double grad_norm_sq, double h) {
  if (k < 1) throw InvalidArgument("threshold: k must be >= 1");
  if (!(h > 0.0)) throw InvalidArgument("threshold: h must be positive");
  const double gk = gamma_of_k(gamma0, k);
  switch (rule.kind()) {
    case ThresholdKind::FullB:
      return 2.0 * gk / std::sqrt(static_cast<double>(k)) +
             std::sqrt(Gamma_sq + gk * gk * grad_norm_sq / (h * h));
    case ThresholdKind::SimpleB:
      return 3.0 * gk;
    case ThresholdKind::ImprovedWarmupB:
      return 2.0 * gk / std::sqrt(static_cast<double>(k)) +
             std::sqrt(Gamma_sq +
                       gk * gk / static_cast<double>(rule.horizon()));
  }
  throw InvalidArgument("threshold: unknown rule");
}

Vector probe(const FreeState& state, const Vector& g, double h, int k,
             const Projection& projection) {
  if (!(h > 0.0)) throw InvalidArgument("probe: h must be positive");
  require_same_dim(state.x, g, "probe");
  const double eta = gamma_of_k(state.gamma0, k) / h;
  return projection(step_point(state.x, eta, g));
}

PhaseDecision find_k(const FreeState& state, const Vector& g, double h,
                     const ThresholdRule& rule, const Projection& projection,
                     int k_cap) {
  if (k_cap < state.k)
    throw InvalidArgument("find_k: k_cap below the current phase index");
  const double grad_norm_sq = norm_sq(g);
  std::vector<ProbeAttempt> attempts;
  for (int k = state.k; k <= k_cap; ++k) {
    Vector candidate = probe(state, g, h, k, projection);
    const double B =
        threshold(rule, k, state.gamma0, state.Gamma_sq, grad_norm_sq, h);
    const double d = dist(candidate, state.x1);
    if (d <= B) return PhaseDecision{k, std::move(candidate), B, d};
    attempts.push_back(ProbeAttempt{k, d, B});
  }
  throw DivergenceGuard(
      "find_k: no admissible k within " + std::to_string(k_cap - state.k + 1) +
          " doublings (bug or violated precondition)",
      std::move(attempts));
}

StepOutcome step(const FreeState& state, const Problem& problem,
                 const StepScale& scale, const ThresholdRule& rule) {
  Evaluation ev = evaluate(problem, state.x);
  const double grad_norm_sq = norm_sq(ev.subgrad);
  const double S = state.S + grad_norm_sq;

  // SqrtS before any nonzero gradient has no defined scale; the step is
  // disabled for such iterations (h = inf, so eta = 0 and the probe stays put).
  double h;
  if (scale.kind() == StepScaleKind::SqrtS && S == 0.0)
    h = std::numeric_limits<double>::infinity();
  else
    h = scale.h(S, state.k);

  PhaseDecision decision = find_k(state, ev.subgrad, h, rule,
                                  problem.constraint(),
                                  state.k + kDefaultDoublingCap);

  const double gk = gamma_of_k(state.gamma0, decision.k);
  const double Gamma_sq = state.Gamma_sq + gk * gk * grad_norm_sq / (h * h);

  TraceRecord record;
  record.t = state.t;
  record.k = decision.k;
  record.gamma_k = gk;
  record.h = h;
  record.eta = gk / h;
  record.f_x = ev.value;
  record.grad_norm_sq = grad_norm_sq;
  record.S = S;
  record.Gamma_sq = Gamma_sq;
  record.dist_to_x1 = decision.dist_to_x1;
  record.B = decision.B;

  FreeState next{state.t + 1, std::move(decision.x_next), state.x1,
                 S,           Gamma_sq,                   decision.k,
                 state.gamma0};
  return StepOutcome{std::move(next), record};
}

RunResult run(const Problem& problem, const StepScale& scale,
              const ThresholdRule& rule, double gamma0, long long T,
              const RunOptions& options) {
  if (T < 1) throw InvalidArgument("run: T must be >= 1");
  FreeState state = make_free_state(problem, gamma0);

  Trace trace;
  trace.meta.algorithm =
      std::string("free_adagrad:") + step_scale_name(scale.kind());
  trace.records.reserve(static_cast<std::size_t>(T));

  std::vector<double> avg_acc(problem.dim(), 0.0);
  std::vector<std::pair<long long, Vector>> checkpoints;
  double g1_norm_sq = 0.0;

  for (long long t = 1; t <= T; ++t) {
    kernels::add_into(avg_acc, state.x.span());
    StepOutcome out = step(state, problem, scale, rule);
    if (t == 1) g1_norm_sq = out.record.grad_norm_sq;
    trace.records.push_back(out.record);
    state = std::move(out.state);
    if (std::find(options.avg_checkpoints.begin(),
                  options.avg_checkpoints.end(),
                  t) != options.avg_checkpoints.end()) {
      std::vector<double> avg(avg_acc);
      for (double& v : avg) v /= static_cast<double>(t);
      checkpoints.emplace_back(t, Vector(std::move(avg)));
    }
  }

  // One extra oracle query at x_{T+1} pins S_{T+1} and h_{T+1} for the
  // bound certifiers.
  Evaluation extra = evaluate(problem, state.x);
  const double S_T1 = state.S + norm_sq(extra.subgrad);
  double h_T1;
  if (scale.kind() == StepScaleKind::SqrtS && S_T1 == 0.0)
    h_T1 = std::numeric_limits<double>::infinity();
  else
    h_T1 = scale.h(S_T1, state.k);

  std::vector<double> avg(avg_acc);
  for (double& v : avg) v /= static_cast<double>(T);

  return RunResult{std::move(trace),
                   std::move(state.x),
                   Vector(std::move(avg)),
                   std::move(checkpoints),
                   g1_norm_sq,
                   S_T1,
                   h_T1};
}

}  // namespace freegrad
