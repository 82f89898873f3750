#include "freegrad/problems.hpp"

#include <cmath>
#include <memory>

#include "freegrad/rng.hpp"

namespace freegrad {

namespace {

// RNG stream ids within a problem instance.
constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kInitStream = 1;

std::vector<double> draw_uniform(std::size_t dim, std::uint64_t seed,
                                 std::uint64_t stream, double lo, double hi) {
  Rng rng(seed, stream);
  std::vector<double> out(dim);
  for (double& v : out) v = rng.uniform(lo, hi);
  return out;
}

struct AbsLinearData {
  std::vector<double> rows;  // row-major n x d
  std::size_t n;
  std::size_t d;
  double mean_row_norm;
};

AbsLinearData make_abslinear_data(std::size_t n, std::size_t d,
                                  std::uint64_t data_seed) {
  Rng rng(data_seed, kDataStream);
  AbsLinearData data;
  data.n = n;
  data.d = d;
  data.rows.resize(n * d);
  for (double& v : data.rows) v = rng.normal();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += std::sqrt(
        kernels::nrm2_sq(std::span<const double>(data.rows.data() + i * d, d)));
  data.mean_row_norm = acc / static_cast<double>(n);
  return data;
}

Objective norm1_objective(std::size_t dim) {
  Objective obj;
  obj.value = [](const Vector& x) { return kernels::abs_sum(x.span()); };
  obj.subgrad = [](const Vector& x) {
    std::vector<double> g(x.dim());
    kernels::sign_into(g, x.span());
    return Vector(std::move(g));
  };
  obj.lipschitz_bound = std::sqrt(static_cast<double>(dim));
  return obj;
}

Objective norm2_objective() {
  Objective obj;
  obj.value = [](const Vector& x) { return norm(x); };
  obj.subgrad = [](const Vector& x) {
    const double r = norm(x);
    if (r == 0.0) return Vector::zeros(x.dim());
    return scaled(x, 1.0 / r);
  };
  obj.lipschitz_bound = 1.0;
  return obj;
}

Objective abslinear_objective(std::shared_ptr<const AbsLinearData> data) {
  Objective obj;
  const double inv_n = 1.0 / static_cast<double>(data->n);
  obj.fused = [data, inv_n](const Vector& x) {
    if (x.dim() != data->d)
      throw InvalidArgument("abslinear: dimension mismatch");
    std::vector<double> y(data->n);
    kernels::matvec(data->rows.data(), data->n, data->d, x.span(), y);
    const double value = inv_n * kernels::abs_sum(y);
    std::vector<double> s(data->n);
    kernels::sign_into(s, y);
    std::vector<double> g(data->d);
    kernels::weighted_row_sum(data->rows.data(), data->n, data->d, s, inv_n,
                              g);
    return std::make_pair(value, Vector(std::move(g)));
  };
  obj.value = [fused = obj.fused](const Vector& x) { return fused(x).first; };
  obj.subgrad = [fused = obj.fused](const Vector& x) {
    return fused(x).second;
  };
  obj.lipschitz_bound = data->mean_row_norm;
  return obj;
}

Objective expsum_objective(std::shared_ptr<const ExpSumInstance> inst) {
  Objective obj;
  obj.value = [inst](const Vector& x) {
    return expsum_value(x, inst->centers, inst->sigmas);
  };
  obj.subgrad = [inst](const Vector& x) {
    return expsum_subgrad(x, inst->centers, inst->sigmas);
  };
  return obj;
}

}  // namespace

const char* family_name(Family family) {
  switch (family) {
    case Family::Norm1:
      return "norm1";
    case Family::Norm2:
      return "norm2";
    case Family::AbsLinear:
      return "abslinear";
    case Family::ExpSum:
      return "expsum";
  }
  return "?";
}

std::optional<Family> parse_family(const std::string& name) {
  if (name == "norm1") return Family::Norm1;
  if (name == "norm2") return Family::Norm2;
  if (name == "abslinear") return Family::AbsLinear;
  if (name == "expsum") return Family::ExpSum;
  return std::nullopt;
}

double expsum_value(const Vector& x, const std::vector<Vector>& centers,
                    const std::vector<double>& sigmas) {
  double acc = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    acc += std::exp(dist(x, centers[i]) / sigmas[i]);
  return acc;
}

Vector expsum_subgrad(const Vector& x, const std::vector<Vector>& centers,
                      const std::vector<double>& sigmas) {
  std::vector<double> g(x.dim(), 0.0);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    require_same_dim(x, centers[i], "expsum_subgrad");
    const double r = dist(x, centers[i]);
    if (r == 0.0) continue;  // 0 is a valid subgradient of the kink
    const double w = std::exp(r / sigmas[i]) / (sigmas[i] * r);
    for (std::size_t j = 0; j < x.dim(); ++j)
      g[j] += w * (x[j] - centers[i][j]);
  }
  return Vector(std::move(g));
}

std::vector<double> abslinear_rows(std::size_t n, std::size_t dim,
                                   std::uint64_t data_seed) {
  return make_abslinear_data(n, dim, data_seed).rows;
}

ExpSumInstance expsum_instance(std::size_t dim, std::uint64_t data_seed) {
  constexpr std::size_t kCenters = 5;
  Rng rng(data_seed, kDataStream);
  ExpSumInstance inst;
  inst.sigmas.assign(kCenters, 1.0);
  for (std::size_t i = 0; i < kCenters; ++i) {
    std::vector<double> c(dim);
    for (double& v : c) v = rng.uniform(0.0, 1.0);
    inst.centers.emplace_back(std::move(c));
  }
  return inst;
}

Problem build(const ProblemSpec& spec) {
  if (spec.dim < 1) throw InvalidArgument("build: dim must be >= 1");
  switch (spec.family) {
    case Family::Norm1: {
      Vector x1(draw_uniform(spec.dim, spec.init_seed, kInitStream, -1.0, 1.0));
      return Problem(norm1_objective(spec.dim), Projection::whole_space(),
                     std::move(x1), Vector::zeros(spec.dim), 0.0);
    }
    case Family::Norm2: {
      Vector x1(draw_uniform(spec.dim, spec.init_seed, kInitStream, -1.0, 1.0));
      return Problem(norm2_objective(), Projection::whole_space(),
                     std::move(x1), Vector::zeros(spec.dim), 0.0);
    }
    case Family::AbsLinear: {
      if (spec.n < 1) throw InvalidArgument("build: AbsLinear needs n >= 1");
      auto data = std::make_shared<const AbsLinearData>(
          make_abslinear_data(spec.n, spec.dim, spec.data_seed));
      Vector x1(draw_uniform(spec.dim, spec.init_seed, kInitStream, -1.0, 1.0));
      return Problem(abslinear_objective(std::move(data)),
                     Projection::whole_space(), std::move(x1),
                     Vector::zeros(spec.dim), 0.0);
    }
    case Family::ExpSum: {
      auto inst = std::make_shared<const ExpSumInstance>(
          expsum_instance(spec.dim, spec.data_seed));
      Vector x1(draw_uniform(spec.dim, spec.init_seed, kInitStream, 0.0, 1.0));
      return Problem(expsum_objective(std::move(inst)),
                     Projection::nonnegative_orthant(), std::move(x1));
    }
  }
  throw InvalidArgument("build: unknown family");
}

std::optional<double> lipschitz_bound(const ProblemSpec& spec) {
  switch (spec.family) {
    case Family::Norm1:
      return std::sqrt(static_cast<double>(spec.dim));
    case Family::Norm2:
      return 1.0;
    case Family::AbsLinear:
      if (spec.n < 1)
        throw InvalidArgument("lipschitz_bound: AbsLinear needs n >= 1");
      return make_abslinear_data(spec.n, spec.dim, spec.data_seed)
          .mean_row_norm;
    case Family::ExpSum:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace freegrad
