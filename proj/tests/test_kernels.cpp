#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "freegrad/kernels.hpp"
#include "support/util.hpp"

using namespace freegrad;
namespace k = freegrad::kernels;

namespace {

// Sizes straddling the vector width and its tails.
const std::vector<std::size_t> kSizes = {1, 2, 3, 4, 5, 7, 8,
                                         9, 15, 16, 31, 64, 97, 1000};

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

TEST_CASE("scalar kernels: known values") {
  std::vector<double> a = {1.0, -2.0, 3.0};
  std::vector<double> b = {4.0, 5.0, -6.0};
  CHECK(k::scalar::dot(a, b) == doctest::Approx(4.0 - 10.0 - 18.0));
  CHECK(k::scalar::nrm2_sq(a) == doctest::Approx(14.0));
  CHECK(k::scalar::dist_sq(a, b) == doctest::Approx(9.0 + 49.0 + 81.0));
  CHECK(k::scalar::abs_sum(a) == doctest::Approx(6.0));

  std::vector<double> out(3);
  k::scalar::step_into(out, a, 0.5, b);
  CHECK(out[0] == doctest::Approx(-1.0));
  CHECK(out[1] == doctest::Approx(-4.5));
  CHECK(out[2] == doctest::Approx(6.0));

  std::vector<double> signs = {-3.0, 0.0, 2.0};
  k::scalar::sign_into(out, signs);
  CHECK(out == std::vector<double>{-1.0, 0.0, 1.0});
}

TEST_CASE("scalar and avx2 kernels agree") {
  if (!k::cpu_has_avx2()) return;  // nothing to compare on this machine
  Rng rng(20240517);
  for (std::size_t n : kSizes) {
    std::vector<double> a = testutil::random_entries(rng, n, -3.0, 3.0);
    std::vector<double> b = testutil::random_entries(rng, n, -3.0, 3.0);

    CHECK(rel_close(k::scalar::dot(a, b), k::avx2::dot(a, b), 1e-12));
    CHECK(rel_close(k::scalar::nrm2_sq(a), k::avx2::nrm2_sq(a), 1e-12));
    CHECK(rel_close(k::scalar::dist_sq(a, b), k::avx2::dist_sq(a, b), 1e-12));
    CHECK(rel_close(k::scalar::abs_sum(a), k::avx2::abs_sum(a), 1e-12));

    std::vector<double> s1(n), s2(n);
    k::scalar::step_into(s1, a, 0.73, b);
    k::avx2::step_into(s2, a, 0.73, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_close(s1[i], s2[i], 1e-15));

    k::scalar::clamp_nonneg(s1, a);
    k::avx2::clamp_nonneg(s2, a);
    CHECK(s1 == s2);

    std::vector<double> lo(n, -0.5), hi(n, 0.5);
    k::scalar::clamp_box(s1, a, lo, hi);
    k::avx2::clamp_box(s2, a, lo, hi);
    CHECK(s1 == s2);

    k::scalar::blend_toward(s1, b, a, 0.31);
    k::avx2::blend_toward(s2, b, a, 0.31);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_close(s1[i], s2[i], 1e-15));

    k::scalar::sign_into(s1, a);
    k::avx2::sign_into(s2, a);
    CHECK(s1 == s2);

    std::vector<double> acc1 = b, acc2 = b;
    k::scalar::add_into(acc1, a);
    k::avx2::add_into(acc2, a);
    CHECK(acc1 == acc2);
  }
}

TEST_CASE("scalar and avx2 matvec / weighted_row_sum agree") {
  if (!k::cpu_has_avx2()) return;
  Rng rng(99);
  const std::pair<std::size_t, std::size_t> shapes[] = {
      {1, 1}, {3, 7}, {8, 16}, {20, 33}, {50, 125}};
  for (auto [rows, cols] : shapes) {
    std::vector<double> a = testutil::random_entries(rng, rows * cols, -2, 2);
    std::vector<double> x = testutil::random_entries(rng, cols, -2, 2);
    std::vector<double> y1(rows), y2(rows);
    k::scalar::matvec(a.data(), rows, cols, x, y1);
    k::avx2::matvec(a.data(), rows, cols, x, y2);
    for (std::size_t i = 0; i < rows; ++i)
      CHECK(rel_close(y1[i], y2[i], 1e-12));

    std::vector<double> s(rows);
    k::scalar::sign_into(s, y1);
    std::vector<double> g1(cols), g2(cols);
    const double inv = 1.0 / static_cast<double>(rows);
    k::scalar::weighted_row_sum(a.data(), rows, cols, s, inv, g1);
    k::avx2::weighted_row_sum(a.data(), rows, cols, s, inv, g2);
    for (std::size_t j = 0; j < cols; ++j)
      CHECK(rel_close(g1[j], g2[j], 1e-12));
  }
}

TEST_CASE("backend dispatch and override") {
  const k::Backend startup = k::active_backend();
  if (k::cpu_has_avx2()) {
    k::force_backend(k::Backend::Scalar);
    CHECK(k::active_backend() == k::Backend::Scalar);
    std::vector<double> a = {1.0, 2.0, 3.0, 4.0, 5.0};
    const double scalar_value = k::nrm2_sq(a);
    k::force_backend(k::Backend::Avx2);
    CHECK(k::active_backend() == k::Backend::Avx2);
    CHECK(rel_close(k::nrm2_sq(a), scalar_value, 1e-13));
  } else {
    CHECK(k::active_backend() == k::Backend::Scalar);
    CHECK_THROWS_AS(k::force_backend(k::Backend::Avx2), InvalidArgument);
  }
  k::force_backend(startup);
  CHECK(std::string(k::backend_name(k::Backend::Scalar)) == "scalar");
  CHECK(std::string(k::backend_name(k::Backend::Avx2)) == "avx2");
}
