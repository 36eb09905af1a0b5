#include "tarmac/simd/kernels.hpp"

#include <cstdlib>
#include <string>

#include "tarmac/error.hpp"

namespace tarmac::simd {

namespace {

struct KernelTable {
    Isa isa;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
};

constexpr KernelTable kScalarTable{Isa::Scalar, scalar::dot, scalar::axpy, scalar::squared_distance};
#if defined(TARMAC_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::Avx2, avx2::dot, avx2::axpy, avx2::squared_distance};
#endif

bool cpu_has_avx2() {
#if defined(TARMAC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& table_for(Isa isa) {
#if defined(TARMAC_HAVE_AVX2)
    if (isa == Isa::Avx2) return kAvx2Table;
#endif
    (void)isa;
    return kScalarTable;
}

const KernelTable* initial_table() {
    const char* env = std::getenv("TARMAC_SIMD");
    if (env != nullptr && std::string(env) == "scalar") return &kScalarTable;
    return isa_available(Isa::Avx2) ? &table_for(Isa::Avx2) : &kScalarTable;
}

const KernelTable*& current() {
    static const KernelTable* table = initial_table();
    return table;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
    if (isa == Isa::Scalar) return true;
    static const bool avx2 = cpu_has_avx2();
    return avx2;
}

Isa active_isa() { return current()->isa; }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) throw ParameterError("SIMD variant unavailable: " + std::string(isa_name(isa)));
    current() = &table_for(isa);
}

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "dot: length mismatch");
    return current()->dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require(x.size() == y.size(), "axpy: length mismatch");
    current()->axpy(alpha, x.data(), y.data(), x.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "squared_distance: length mismatch");
    return current()->squared_distance(a.data(), b.data(), a.size());
}

}  // namespace tarmac::simd
