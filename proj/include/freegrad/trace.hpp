#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "freegrad/vector.hpp"

namespace freegrad {

// One row per iteration. Conventions: f_x and grad_norm_sq are taken at the
// pre-step iterate x_t; S and Gamma_sq are the running sums after absorbing
// step t; dist_to_x1 is measured at the accepted next iterate x_{t+1}.
struct TraceRecord {
  long long t = 0;
  long long k = 0;
  double gamma_k = 0.0;
  double h = 0.0;
  double eta = 0.0;
  double f_x = 0.0;
  double grad_norm_sq = 0.0;
  double S = 0.0;
  double Gamma_sq = 0.0;
  double dist_to_x1 = 0.0;
  double B = 0.0;
};

struct TraceMeta {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string generator;  // empty for deterministic runs
};

struct Trace {
  TraceMeta meta;
  std::vector<TraceRecord> records;
};

// A finished optimizer run. x_avg is the plain average of x_1..x_T; S_T1 and
// h_T1 extend the trace by one oracle query at x_final, which is how the
// bound certifiers obtain S_{T+1} and h_{T+1}.
struct RunResult {
  Trace trace;
  Vector x_final;
  Vector x_avg;
  std::vector<std::pair<long long, Vector>> avg_checkpoints;
  double g1_norm_sq = 0.0;
  double S_T1 = 0.0;
  double h_T1 = 0.0;
};

struct RunOptions {
  std::vector<long long> avg_checkpoints;
};

}  // namespace freegrad
