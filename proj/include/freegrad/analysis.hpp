#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freegrad/trace.hpp"

namespace freegrad {

// Theoretical quantities computable for a finished run: the dyadic index k*
// locating D_{gamma0} = max(D, gamma0), the proven phase cap k_bar, and every
// applicable regret bound.
struct BoundReport {
  double D_gamma0 = 0.0;
  int k_star = 0;
  int k_bar = 0;
  double S_T = 0.0;
  double S_T1 = 0.0;
  std::map<std::string, double> bounds;
};

// sum_t (f(x_t) - f_star). Requires a nonempty trace and
// f_star <= min recorded value + 1e-9.
double cumulative_regret(std::span<const TraceRecord> trace, double f_star);

// Smallest k >= 1 with gamma0 2^(k-1) <= max(D, gamma0) <= gamma0 2^k.
int k_star(double gamma0, double D);

// Smallest integer with 2^k / sqrt(k) >= 2^k_star.
int k_bar(int k_star);

double D_gamma0(double gamma0, double D);

// D_g H(S_{T+1}) sqrt(log2(2 D_g / gamma0)) [6 log(log(e(1+S_T))) + 6.5]
double bound_cor_main(double D, double gamma0, double S_T, double S_T1);

// D_g sqrt(S_{T+1} log2(2 D_g / gamma0)) [6 log(e S_T / ||g1||^2) + 6.5]
double bound_cor_sqrt(double D, double gamma0, double S_T, double S_T1,
                      double g1_norm_sq);

// D_g sqrt((S_{T+1} + eps) log2(2 D_g / gamma0)) [6 log(1 + S_T / eps) + 6.5]
double bound_cor_eps(double D, double gamma0, double S_T, double S_T1,
                     double epsilon);

// simple = false: 10 D_g L sqrt(T) sqrt(2 log2(2 D_g / gamma0));
// simple = true:  3 dist L sqrt(T) log2(2 D_g / gamma0) + 2 D_g L sqrt(T),
// where dist = ||x1 - x*||.
double bound_warmup(double D, double gamma0, double L, long long T,
                    bool simple, double dist);

// 3500 D_g L sqrt(T) log2(2 D_g / gamma0) ell_T^(1/2)(delta / log2^2(4 D_g / gamma0))
double bound_stochastic(double D, double gamma0, double L, long long T,
                        double delta);

// Right-hand side of the any-h trajectory inequality, recomputed from the
// trace: h_{T+1} [2 ||x1-x*|| sqrt(k_T) (2 + sqrt(Q/3)) + gamma_{k_T} Q] with
// Q = sum_t ||g_t||^2 / h_t^2.
double trajectory_bound_rhs(std::span<const TraceRecord> trace,
                            double dist_x1_to_xstar, double h_T1);

// Evaluates both sides of the five auxiliary summation inequalities on a
// nonnegative sequence; throws PropertyFailure (naming the lemma) if any is
// violated beyond 1e-9 slack.
struct AuxSumsReport {
  struct Entry {
    std::string lemma;
    double lhs;
    double rhs;
  };
  std::vector<Entry> entries;
};

AuxSumsReport check_aux_sums(std::span<const double> a, double epsilon);

// Optional ingredients for the bound map; each present field unlocks the
// corresponding entries.
struct BoundInputs {
  std::optional<double> g1_norm_sq;  // cor_sqrt
  std::optional<double> epsilon;     // cor_eps
  std::optional<double> L;           // warmup_*, stochastic (with T)
  std::optional<long long> T;
  std::optional<double> delta;  // stochastic
  std::optional<double> dist;   // ||x1 - x*||, warmup_simple
};

// Report builder for a finished run with known distance D = ||x1 - x*||.
BoundReport make_bound_report(double gamma0, double D, double S_T, double S_T1,
                              const BoundInputs& inputs = {});

}  // namespace freegrad
