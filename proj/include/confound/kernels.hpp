#pragma once

// Data-parallel inner loops shared by detection and the estimators.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is picked once per process from CPUID; setting the
// environment variable CONFOUND_SIMD=scalar forces the reference path.
//
// Elementwise kernels (window deviation, max, residual) are bit-identical
// across variants. Reductions (sum, dot) reassociate and agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace confound::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    double (*sum)(std::span<const double> a);
    double (*dot)(std::span<const double> a, std::span<const double> b);
    // out[i] = max_{1<=k<window_len} |x[i+k] - x[i]|, out.size() == x.size() - window_len + 1
    void (*window_max_deviation)(std::span<const double> x, std::size_t window_len,
                                 std::span<double> out);
    // acc[i] = max(acc[i], v[i])
    void (*max_inplace)(std::span<double> acc, std::span<const double> v);
    // out[i] = y[i] - c * u[i]
    void (*residual)(std::span<const double> y, std::span<const double> u, double c,
                     std::span<double> out);
};

namespace scalar {
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
void window_max_deviation(std::span<const double> x, std::size_t window_len,
                          std::span<double> out);
void max_inplace(std::span<double> acc, std::span<const double> v);
void residual(std::span<const double> y, std::span<const double> u, double c,
              std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CONFOUND_HAVE_AVX2_KERNELS 1
namespace avx2 {
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
void window_max_deviation(std::span<const double> x, std::size_t window_len,
                          std::span<double> out);
void max_inplace(std::span<double> acc, std::span<const double> v);
void residual(std::span<const double> y, std::span<const double> u, double c,
              std::span<double> out);
}  // namespace avx2
#endif

/// True when the running CPU can execute the given variant.
bool isa_supported(Isa isa) noexcept;

/// Table for a specific variant; the variant must be supported.
const KernelTable& table(Isa isa);

/// Table selected at startup.
const KernelTable& active();

inline double sum(std::span<const double> a) { return active().sum(a); }
inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a, b);
}
inline void window_max_deviation(std::span<const double> x, std::size_t window_len,
                                 std::span<double> out) {
    active().window_max_deviation(x, window_len, out);
}
inline void max_inplace(std::span<double> acc, std::span<const double> v) {
    active().max_inplace(acc, v);
}
inline void residual(std::span<const double> y, std::span<const double> u, double c,
                     std::span<double> out) {
    active().residual(y, u, c, out);
}

}  // namespace confound::kernels
