#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "freegrad/problems.hpp"
#include "freegrad/trace.hpp"

namespace freegrad {

enum class Algo {
  FreeAdagradMain,
  FreeAdagradSqrt,
  FreeAdagradEps,
  WarmupSimple,
  WarmupImproved,
  AdagradOracleD,
  OracleFixed,
  Stochastic,
};

const char* algo_name(Algo algo);
std::optional<Algo> parse_algo(const std::string& name);

struct ExperimentConfig {
  Family family = Family::Norm1;
  std::size_t dim = 625;
  std::size_t n = 1000;  // AbsLinear rows
  std::vector<Algo> algorithms;
  double gamma0 = 1.0;
  double eps = 1.0;      // for free_adagrad_eps
  double delta = 0.1;    // for stochastic
  std::optional<double> L_override;
  long long T = 10000;
  std::vector<std::uint64_t> seeds = {1};
  std::filesystem::path output_dir = "out";
};

// One (algorithm, seed) cell of a finished experiment.
struct ExperimentCell {
  Algo algo;
  std::uint64_t seed = 0;
  std::filesystem::path csv;
  double final_regret = 0.0;  // against known f* (0 when unknown)
  bool has_regret = false;
  long long k_T = 1;
};

struct Certification {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentCell> cells;
  std::vector<Certification> certifications;
  std::filesystem::path manifest;
  std::filesystem::path report;
  std::filesystem::path regret_svg;
  std::filesystem::path stepsize_svg;
  double wall_seconds = 0.0;
  int exit_code = 0;  // 0 ok, 3 when a certified bound failed
};

// Test hook: scales every certified bound. Production callers leave it at 1;
// the exit-code-3 meta-test shrinks it to force a violation.
struct ExperimentHooks {
  double bound_scale = 1.0;
};

// Runs every (algorithm, seed) cell, writes one CSV per cell plus
// manifest.txt, report.txt, regret.svg and stepsize.svg under
// config.output_dir, and certifies every applicable bound inequality.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentHooks& hooks = {});

}  // namespace freegrad
