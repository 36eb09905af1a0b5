#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense inner loops used by the neural models. Every kernel has a portable
// scalar reference implementation; on x86-64 an AVX2/FMA variant is compiled
// in and chosen at runtime when the CPU supports it. Set TARMAC_SIMD=scalar
// in the environment to pin the reference path.
namespace tarmac::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// Variant used by the dispatching entry points below.
Isa active_isa();

// Overrides runtime selection (tests and benchmarks). Throws ParameterError
// when the requested variant is unavailable.
void set_active_isa(Isa isa);

// Σ a[i]·b[i]
double dot(std::span<const double> a, std::span<const double> b);
// y += alpha·x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// Σ (a[i]-b[i])²
double squared_distance(std::span<const double> a, std::span<const double> b);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(TARMAC_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

}  // namespace tarmac::simd
