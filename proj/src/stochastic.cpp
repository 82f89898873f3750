#include "freegrad/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "freegrad/free_adagrad.hpp"
#include "freegrad/step_scale.hpp"

namespace freegrad {

RunResult run_stochastic(const Problem& problem, const StochasticOracle& oracle,
                         const StochasticConfig& config, std::uint64_t seed,
                         std::uint64_t stream, const RunOptions& options) {
  if (!(config.gamma0 > 0.0) || !(config.L > 0.0) || config.T < 1 ||
      !(config.delta > 0.0) || config.delta >= 1.0)
    throw InvalidArgument("run_stochastic: invalid config");
  if (!oracle.sample_subgrad)
    throw InvalidArgument("run_stochastic: oracle must be set");

  const double gamma0 = config.gamma0;
  Rng rng(seed, stream);
  Vector x = problem.x1();
  const Vector& x1 = problem.x1();
  double S = 0.0;
  double Gamma_sq = 0.0;
  int k = 1;  // k_0 = 1
  double g1_norm_sq = 0.0;

  Trace trace;
  trace.meta.algorithm = "stochastic_pgd";
  trace.meta.seed = seed;
  trace.meta.stream = stream;
  trace.meta.generator = Rng::generator_name();
  trace.records.reserve(static_cast<std::size_t>(config.T));

  std::vector<double> avg_acc(problem.dim(), 0.0);
  std::vector<std::pair<long long, Vector>> checkpoints;

  double h = 0.0;
  for (long long t = 1; t <= config.T; ++t) {
    kernels::add_into(avg_acc, x.span());
    const double f_x = problem.objective().value(x);

    Vector g = oracle.sample_subgrad(x, rng);
    require_same_dim(g, x, "run_stochastic");
    const double gn2 = norm_sq(g);
    if (gn2 > config.L * config.L * (1.0 + 1e-9))
      throw InvalidArgument(
          "run_stochastic: sampled subgradient exceeds the Lipschitz bound");
    S += gn2;
    if (t == 1) g1_norm_sq = gn2;

    // h is set from k_{t-1} before the probing loop and not recomputed
    // inside it.
    h = h_stochastic(config.L, config.T, config.delta, k);

    int kt = k;
    Vector candidate = x;
    double B = 0.0;
    double d = 0.0;
    std::vector<ProbeAttempt> attempts;
    const int k_cap = k + kDefaultDoublingCap;
    for (;; ++kt) {
      if (kt > k_cap)
        throw DivergenceGuard(
            "run_stochastic: no admissible k within " +
                std::to_string(kDefaultDoublingCap + 1) + " doublings",
            std::move(attempts));
      const double gk = gamma_of_k(gamma0, kt);
      candidate = problem.constraint()(step_point(x, gk / h, g));
      B = 38.0 * gk;
      d = dist(candidate, x1);
      if (d <= B) break;
      attempts.push_back(ProbeAttempt{kt, d, B});
    }

    const double gk = gamma_of_k(gamma0, kt);
    Gamma_sq += gk * gk * gn2 / (h * h);

    TraceRecord rec;
    rec.t = t;
    rec.k = kt;
    rec.gamma_k = gk;
    rec.h = h;
    rec.eta = gk / h;
    rec.f_x = f_x;
    rec.grad_norm_sq = gn2;
    rec.S = S;
    rec.Gamma_sq = Gamma_sq;
    rec.dist_to_x1 = d;
    rec.B = B;
    trace.records.push_back(rec);

    x = std::move(candidate);
    k = kt;

    if (std::find(options.avg_checkpoints.begin(),
                  options.avg_checkpoints.end(),
                  t) != options.avg_checkpoints.end()) {
      std::vector<double> avg(avg_acc);
      for (double& v : avg) v /= static_cast<double>(t);
      checkpoints.emplace_back(t, Vector(std::move(avg)));
    }
  }

  std::vector<double> avg(avg_acc);
  for (double& v : avg) v /= static_cast<double>(config.T);

  // No extra draw: Theorem 4's bound involves neither S_{T+1} nor h_{T+1};
  // h_T1 reports the final-phase scale.
  return RunResult{std::move(trace),
                   std::move(x),
                   Vector(std::move(avg)),
                   std::move(checkpoints),
                   g1_norm_sq,
                   S,
                   h_stochastic(config.L, config.T, config.delta, k)};
}

NoisySign make_noisy_sign(std::size_t dim, double sigma,
                          std::uint64_t data_seed, std::uint64_t init_seed) {
  if (dim < 1) throw InvalidArgument("make_noisy_sign: dim must be >= 1");
  if (!(sigma > 0.0))
    throw InvalidArgument("make_noisy_sign: sigma must be positive");

  Rng data_rng(data_seed, /*stream=*/0);
  std::vector<double> a_raw(dim);
  for (double& v : a_raw) v = data_rng.normal();
  auto a = std::make_shared<const Vector>(std::move(a_raw));
  const double a_norm = norm(*a);

  Rng init_rng(init_seed, /*stream=*/1);
  std::vector<double> x1(dim);
  for (double& v : x1) v = init_rng.uniform(-1.0, 1.0);

  // phi(u) = E|u - xi|, xi ~ U[-sigma, sigma]
  auto phi = [sigma](double u) {
    return std::fabs(u) >= sigma ? std::fabs(u)
                                 : (u * u + sigma * sigma) / (2.0 * sigma);
  };
  auto phi_prime = [sigma](double u) {
    if (u >= sigma) return 1.0;
    if (u <= -sigma) return -1.0;
    return u / sigma;
  };

  Objective f;
  f.value = [a, phi](const Vector& x) { return phi(dot(*a, x)); };
  f.subgrad = [a, phi_prime](const Vector& x) {
    return scaled(*a, phi_prime(dot(*a, x)));
  };
  f.lipschitz_bound = a_norm;

  StochasticOracle oracle;
  oracle.L = a_norm;
  oracle.true_objective = f;
  oracle.sample_subgrad = [a, sigma](const Vector& x, Rng& rng) {
    const double u = dot(*a, x) - rng.uniform(-sigma, sigma);
    const double s = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    return scaled(*a, s);
  };

  Problem problem(std::move(f), Projection::whole_space(),
                  Vector(std::move(x1)), Vector::zeros(dim), sigma / 2.0);
  return NoisySign{std::move(problem), std::move(oracle), *a, sigma};
}

}  // namespace freegrad
