#pragma once

// Dense double-precision kernels behind every optimizer inner loop.
//
// Each kernel exists twice: a plain scalar reference and an AVX2+FMA variant.
// The active backend is picked once at startup from CPUID, can be pinned with
// the FREEGRAD_KERNELS environment variable (auto|scalar|avx2) or with
// force_backend(), and the two variants are checked against each other by the
// kernel equivalence tests.

#include <cstddef>
#include <span>

namespace freegrad::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool cpu_has_avx2();

// Testing hook; throws InvalidArgument if the CPU lacks the requested ISA.
void force_backend(Backend b);

double dot(std::span<const double> a, std::span<const double> b);
double nrm2_sq(std::span<const double> a);
double dist_sq(std::span<const double> a, std::span<const double> b);
double abs_sum(std::span<const double> a);

// out = x - eta * g
void step_into(std::span<double> out, std::span<const double> x, double eta,
               std::span<const double> g);
// acc += x
void add_into(std::span<double> acc, std::span<const double> x);
// out[i] = max(x[i], 0)
void clamp_nonneg(std::span<double> out, std::span<const double> x);
// out[i] = min(max(x[i], lo[i]), hi[i])
void clamp_box(std::span<double> out, std::span<const double> x,
               std::span<const double> lo, std::span<const double> hi);
// out = c + s * (x - c)
void blend_toward(std::span<double> out, std::span<const double> center,
                  std::span<const double> x, double s);
// out[i] = sign(x[i]) with sign(0) = 0
void sign_into(std::span<double> out, std::span<const double> x);

// y = A x for row-major A (rows x cols)
void matvec(const double* a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
// out = scale * sum_i s[i] * row_i(A)
void weighted_row_sum(const double* a, std::size_t rows, std::size_t cols,
                      std::span<const double> s, double scale,
                      std::span<double> out);

// Direct entry points for the equivalence tests.
namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double nrm2_sq(std::span<const double> a);
double dist_sq(std::span<const double> a, std::span<const double> b);
double abs_sum(std::span<const double> a);
void step_into(std::span<double> out, std::span<const double> x, double eta,
               std::span<const double> g);
void add_into(std::span<double> acc, std::span<const double> x);
void clamp_nonneg(std::span<double> out, std::span<const double> x);
void clamp_box(std::span<double> out, std::span<const double> x,
               std::span<const double> lo, std::span<const double> hi);
void blend_toward(std::span<double> out, std::span<const double> center,
                  std::span<const double> x, double s);
void sign_into(std::span<double> out, std::span<const double> x);
void matvec(const double* a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
void weighted_row_sum(const double* a, std::size_t rows, std::size_t cols,
                      std::span<const double> s, double scale,
                      std::span<double> out);
}  // namespace scalar

// Call these only when cpu_has_avx2() is true.
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double nrm2_sq(std::span<const double> a);
double dist_sq(std::span<const double> a, std::span<const double> b);
double abs_sum(std::span<const double> a);
void step_into(std::span<double> out, std::span<const double> x, double eta,
               std::span<const double> g);
void add_into(std::span<double> acc, std::span<const double> x);
void clamp_nonneg(std::span<double> out, std::span<const double> x);
void clamp_box(std::span<double> out, std::span<const double> x,
               std::span<const double> lo, std::span<const double> hi);
void blend_toward(std::span<double> out, std::span<const double> center,
                  std::span<const double> x, double s);
void sign_into(std::span<double> out, std::span<const double> x);
void matvec(const double* a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
void weighted_row_sum(const double* a, std::size_t rows, std::size_t cols,
                      std::span<const double> s, double scale,
                      std::span<double> out);
}  // namespace avx2

}  // namespace freegrad::kernels
