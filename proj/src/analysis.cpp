#include "freegrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freegrad/errors.hpp"
#include "freegrad/free_adagrad.hpp"
#include "freegrad/step_scale.hpp"

namespace freegrad {

double cumulative_regret(std::span<const TraceRecord> trace, double f_star) {
  if (trace.empty())
    throw InvalidArgument("cumulative_regret: empty trace");
  double min_f = trace.front().f_x;
  for (const TraceRecord& r : trace) min_f = std::min(min_f, r.f_x);
  if (f_star > min_f + 1e-9)
    throw InvalidArgument(
        "cumulative_regret: f_star exceeds the minimum recorded value");
  double acc = 0.0;
  for (const TraceRecord& r : trace) acc += r.f_x - f_star;
  return acc;
}

double D_gamma0(double gamma0, double D) { return std::max(D, gamma0); }

int k_star(double gamma0, double D) {
  if (!(gamma0 > 0.0) || !(D > 0.0))
    throw InvalidArgument("k_star: gamma0 and D must be positive");
  const double target = D_gamma0(gamma0, D);
  int k = 1;
  while (gamma_of_k(gamma0, k) < target) ++k;
  return k;
}

int k_bar(int ks) {
  if (ks < 1) throw InvalidArgument("k_bar: k_star must be >= 1");
  // 2^k / sqrt(k) >= 2^ks  <=>  k - 0.5 log2(k) >= ks
  int k = 1;
  while (static_cast<double>(k) - 0.5 * std::log2(static_cast<double>(k)) <
         static_cast<double>(ks))
    ++k;
  return k;
}

namespace {

double log2_ratio(double D, double gamma0) {
  return std::log2(2.0 * D_gamma0(gamma0, D) / gamma0);
}

}  // namespace

double bound_cor_main(double D, double gamma0, double S_T, double S_T1) {
  if (S_T1 < S_T) throw InvalidArgument("bound_cor_main: need S_T1 >= S_T");
  const double Dg = D_gamma0(gamma0, D);
  const double bracket =
      6.0 * std::log(std::log(std::exp(1.0) * (1.0 + S_T))) + 6.5;
  return Dg * h_main(S_T1) * std::sqrt(log2_ratio(D, gamma0)) * bracket;
}

double bound_cor_sqrt(double D, double gamma0, double S_T, double S_T1,
                      double g1_norm_sq) {
  if (!(g1_norm_sq > 0.0))
    throw UndefinedScale("bound_cor_sqrt: requires a nonzero first gradient");
  const double Dg = D_gamma0(gamma0, D);
  const double bracket =
      6.0 * std::log(std::exp(1.0) * S_T / g1_norm_sq) + 6.5;
  return Dg * std::sqrt(S_T1 * log2_ratio(D, gamma0)) * bracket;
}

double bound_cor_eps(double D, double gamma0, double S_T, double S_T1,
                     double epsilon) {
  if (!(epsilon > 0.0))
    throw InvalidArgument("bound_cor_eps: epsilon must be positive");
  const double Dg = D_gamma0(gamma0, D);
  const double bracket = 6.0 * std::log(1.0 + S_T / epsilon) + 6.5;
  return Dg * std::sqrt((S_T1 + epsilon) * log2_ratio(D, gamma0)) * bracket;
}

double bound_warmup(double D, double gamma0, double L, long long T,
                    bool simple, double dist) {
  if (!(L > 0.0) || T < 1)
    throw InvalidArgument("bound_warmup: need L > 0 and T >= 1");
  const double Dg = D_gamma0(gamma0, D);
  const double LsqrtT = L * std::sqrt(static_cast<double>(T));
  if (simple)
    return 3.0 * dist * LsqrtT * log2_ratio(D, gamma0) + 2.0 * Dg * LsqrtT;
  return 10.0 * Dg * LsqrtT * std::sqrt(2.0 * log2_ratio(D, gamma0));
}

double bound_stochastic(double D, double gamma0, double L, long long T,
                        double delta) {
  if (!(L > 0.0) || T < 1 || !(delta > 0.0) || delta > 1.0)
    throw InvalidArgument("bound_stochastic: invalid parameters");
  const double Dg = D_gamma0(gamma0, D);
  const double l2 = std::log2(4.0 * Dg / gamma0);
  const double ell = ell_T(T, delta / (l2 * l2));
  return 3500.0 * Dg * L * std::sqrt(static_cast<double>(T)) *
         log2_ratio(D, gamma0) * std::sqrt(ell);
}

double trajectory_bound_rhs(std::span<const TraceRecord> trace,
                            double dist_x1_to_xstar, double h_T1) {
  if (trace.empty())
    throw InvalidArgument("trajectory_bound_rhs: empty trace");
  double Q = 0.0;
  for (const TraceRecord& r : trace) Q += r.grad_norm_sq / (r.h * r.h);
  const double k_T = static_cast<double>(trace.back().k);
  const double gamma_kT = trace.back().gamma_k;
  return h_T1 * (2.0 * dist_x1_to_xstar * std::sqrt(k_T) *
                     (2.0 + std::sqrt(Q / 3.0)) +
                 gamma_kT * Q);
}

AuxSumsReport check_aux_sums(std::span<const double> a, double epsilon) {
  if (a.empty()) throw InvalidArgument("check_aux_sums: empty sequence");
  if (!(epsilon > 0.0))
    throw InvalidArgument("check_aux_sums: epsilon must be positive");
  for (double v : a) {
    if (!(v >= 0.0))
      throw InvalidArgument("check_aux_sums: entries must be nonnegative");
  }

  const double e = std::exp(1.0);
  double S = 0.0;
  double lhs_sums = 0.0;        // sum a_t / sqrt(S_t)
  double lhs_sums2_sqrt = 0.0;  // sum a_t / sqrt((S_t+1) log(e(1+S_t)))
  double lhs_sums2_log = 0.0;   // sum a_t / ((S_t+1) log(e(1+S_t)))
  double lhs_sums3 = 0.0;       // sum a_t / S_t
  double lhs_sums4 = 0.0;       // sum a_t / (eps + S_t)
  const double S1 = a[0];

  for (double v : a) {
    S += v;
    if (v > 0.0) {
      lhs_sums += v / std::sqrt(S);
      lhs_sums3 += v / S;
    }
    const double denom = (S + 1.0) * std::log(e * (1.0 + S));
    lhs_sums2_sqrt += v / std::sqrt(denom);
    lhs_sums2_log += v / denom;
    lhs_sums4 += v / (epsilon + S);
  }

  AuxSumsReport report;
  report.entries = {
      {"sums", lhs_sums, 2.0 * std::sqrt(S)},
      {"sums2_sqrt", lhs_sums2_sqrt, 2.0 * std::sqrt(S)},
      {"sums2_loglog", lhs_sums2_log, std::log(std::log(e * (1.0 + S)))},
      {"sums3", lhs_sums3,
       S1 > 0.0 ? 1.0 + std::log(S / S1)
                : std::numeric_limits<double>::infinity()},
      {"sums4", lhs_sums4, std::log(1.0 + S / epsilon)},
  };

  for (const auto& entry : report.entries) {
    if (entry.lhs > entry.rhs + 1e-9)
      throw PropertyFailure(entry.lemma,
                            "check_aux_sums: lemma " + entry.lemma +
                                " violated: lhs=" + std::to_string(entry.lhs) +
                                " rhs=" + std::to_string(entry.rhs));
  }
  return report;
}

BoundReport make_bound_report(double gamma0, double D, double S_T, double S_T1,
                              const BoundInputs& inputs) {
  BoundReport report;
  report.D_gamma0 = D_gamma0(gamma0, D);
  report.k_star = k_star(gamma0, D);
  report.k_bar = k_bar(report.k_star);
  report.S_T = S_T;
  report.S_T1 = S_T1;
  report.bounds["cor_main"] = bound_cor_main(D, gamma0, S_T, S_T1);
  if (inputs.g1_norm_sq && *inputs.g1_norm_sq > 0.0)
    report.bounds["cor_sqrt"] =
        bound_cor_sqrt(D, gamma0, S_T, S_T1, *inputs.g1_norm_sq);
  if (inputs.epsilon)
    report.bounds["cor_eps"] =
        bound_cor_eps(D, gamma0, S_T, S_T1, *inputs.epsilon);
  if (inputs.L && inputs.T) {
    report.bounds["warmup_improved"] =
        bound_warmup(D, gamma0, *inputs.L, *inputs.T, false, 0.0);
    if (inputs.dist)
      report.bounds["warmup_simple"] =
          bound_warmup(D, gamma0, *inputs.L, *inputs.T, true, *inputs.dist);
    if (inputs.delta)
      report.bounds["stochastic"] =
          bound_stochastic(D, gamma0, *inputs.L, *inputs.T, *inputs.delta);
  }
  return report;
}

}  // namespace freegrad
