#include "freegrad/baselines.hpp"

#include <algorithm>
#include <limits>

namespace freegrad {

namespace {

void maybe_checkpoint(const RunOptions& options, long long t,
                      const std::vector<double>& avg_acc,
                      std::vector<std::pair<long long, Vector>>* out) {
  if (std::find(options.avg_checkpoints.begin(), options.avg_checkpoints.end(),
                t) == options.avg_checkpoints.end())
    return;
  std::vector<double> avg(avg_acc);
  for (double& v : avg) v /= static_cast<double>(t);
  out->emplace_back(t, Vector(std::move(avg)));
}

}  // namespace

RunResult run_adagrad(const Problem& problem, double D, long long T,
                      const RunOptions& options) {
  if (!(D > 0.0)) throw InvalidArgument("run_adagrad: D must be positive");
  if (T < 1) throw InvalidArgument("run_adagrad: T must be >= 1");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  Vector x = problem.x1();
  const Vector& x1 = problem.x1();
  double S = 0.0;
  double Gamma_sq = 0.0;
  double g1_norm_sq = 0.0;

  Trace trace;
  trace.meta.algorithm = "adagrad";
  trace.records.reserve(static_cast<std::size_t>(T));
  std::vector<double> avg_acc(problem.dim(), 0.0);
  std::vector<std::pair<long long, Vector>> checkpoints;

  for (long long t = 1; t <= T; ++t) {
    kernels::add_into(avg_acc, x.span());
    Evaluation ev = evaluate(problem, x);
    const double gn2 = norm_sq(ev.subgrad);
    S += gn2;
    if (t == 1) g1_norm_sq = gn2;

    TraceRecord rec;
    rec.t = t;
    rec.k = 1;
    rec.gamma_k = D;
    rec.f_x = ev.value;
    rec.grad_norm_sq = gn2;
    rec.B = kInf;  // no distance budget in the baseline

    if (S == 0.0) {
      // eta = D / sqrt(S) is undefined until the first nonzero gradient;
      // record a disabled step.
      rec.h = kInf;
      rec.eta = 0.0;
      rec.S = 0.0;
      rec.Gamma_sq = Gamma_sq;
      rec.dist_to_x1 = dist(x, x1);
    } else {
      const double h = std::sqrt(S);
      const double eta = D / h;
      x = problem.constraint()(step_point(x, eta, ev.subgrad));
      Gamma_sq += eta * eta * gn2;
      rec.h = h;
      rec.eta = eta;
      rec.S = S;
      rec.Gamma_sq = Gamma_sq;
      rec.dist_to_x1 = dist(x, x1);
    }
    trace.records.push_back(rec);
    maybe_checkpoint(options, t, avg_acc, &checkpoints);
  }

  Evaluation extra = evaluate(problem, x);
  const double S_T1 = S + norm_sq(extra.subgrad);
  const double h_T1 = S_T1 > 0.0 ? std::sqrt(S_T1) : kInf;

  std::vector<double> avg(avg_acc);
  for (double& v : avg) v /= static_cast<double>(T);

  return RunResult{std::move(trace), std::move(x),  Vector(std::move(avg)),
                   std::move(checkpoints), g1_norm_sq, S_T1, h_T1};
}

RunResult run_adagrad(const Problem& problem, const BaselineConfig& config,
                      long long T, const RunOptions& options) {
  return run_adagrad(problem, config.D, T, options);
}

RunResult run_oracle(const Problem& problem, const BaselineConfig& config,
                     const RunOptions& options) {
  if (!config.L || !config.T)
    throw InvalidArgument("run_oracle: config needs both L and T");
  return run_oracle(problem, config.D, *config.L, *config.T, options);
}

RunResult run_oracle(const Problem& problem, double D, double L, long long T,
                     const RunOptions& options) {
  if (!(D > 0.0) || !(L > 0.0) || T < 1)
    throw InvalidArgument("run_oracle: need D > 0, L > 0, T >= 1");

  const double h = L * std::sqrt(static_cast<double>(T));
  const double eta = D / h;
  Vector x = problem.x1();
  const Vector& x1 = problem.x1();
  double S = 0.0;
  double Gamma_sq = 0.0;
  double g1_norm_sq = 0.0;

  Trace trace;
  trace.meta.algorithm = "oracle";
  trace.records.reserve(static_cast<std::size_t>(T));
  std::vector<double> avg_acc(problem.dim(), 0.0);
  std::vector<std::pair<long long, Vector>> checkpoints;

  for (long long t = 1; t <= T; ++t) {
    kernels::add_into(avg_acc, x.span());
    Evaluation ev = evaluate(problem, x);
    const double gn2 = norm_sq(ev.subgrad);
    S += gn2;
    if (t == 1) g1_norm_sq = gn2;
    x = problem.constraint()(step_point(x, eta, ev.subgrad));
    Gamma_sq += eta * eta * gn2;

    TraceRecord rec;
    rec.t = t;
    rec.k = 1;
    rec.gamma_k = D;
    rec.h = h;
    rec.eta = eta;
    rec.f_x = ev.value;
    rec.grad_norm_sq = gn2;
    rec.S = S;
    rec.Gamma_sq = Gamma_sq;
    rec.dist_to_x1 = dist(x, x1);
    rec.B = std::numeric_limits<double>::infinity();
    trace.records.push_back(rec);
    maybe_checkpoint(options, t, avg_acc, &checkpoints);
  }

  Evaluation extra = evaluate(problem, x);
  const double S_T1 = S + norm_sq(extra.subgrad);

  std::vector<double> avg(avg_acc);
  for (double& v : avg) v /= static_cast<double>(T);

  return RunResult{std::move(trace), std::move(x),  Vector(std::move(avg)),
                   std::move(checkpoints), g1_norm_sq, S_T1, h};
}

}  // namespace freegrad
