// Compiled with -mavx2 (no FMA, so residual stays bit-identical to scalar).
#include "confound/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace confound::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    return _mm256_andnot_pd(sign, v);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(std::span<const double> a) {
    const double* p = a.data();
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += p[i];
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    const double* pa = a.data();
    const double* pb = b.data();
    const std::size_t n = std::min(a.size(), b.size());
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(pa + i + 4),
                                                 _mm256_loadu_pd(pb + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i)));
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += pa[i] * pb[i];
    return s;
}

void window_max_deviation(std::span<const double> x, std::size_t window_len,
                          std::span<double> out) {
    const double* p = x.data();
    const std::size_t n = out.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d anchor = _mm256_loadu_pd(p + i);
        __m256d m = _mm256_setzero_pd();
        for (std::size_t k = 1; k < window_len; ++k) {
            const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(p + i + k), anchor));
            // operand order mirrors std::max(m, d) for NaN handling
            m = _mm256_max_pd(d, m);
        }
        _mm256_storeu_pd(out.data() + i, m);
    }
    for (; i < n; ++i) {
        double m = 0.0;
        for (std::size_t k = 1; k < window_len; ++k) m = std::max(m, std::fabs(p[i + k] - p[i]));
        out[i] = m;
    }
}

void max_inplace(std::span<double> acc, std::span<const double> v) {
    const std::size_t n = acc.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(acc.data() + i);
        const __m256d b = _mm256_loadu_pd(v.data() + i);
        _mm256_storeu_pd(acc.data() + i, _mm256_max_pd(b, a));
    }
    for (; i < n; ++i) acc[i] = std::max(acc[i], v[i]);
}

void residual(std::span<const double> y, std::span<const double> u, double c,
              std::span<double> out) {
    const std::size_t n = out.size();
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i),
                                        _mm256_mul_pd(cv, _mm256_loadu_pd(u.data() + i)));
        _mm256_storeu_pd(out.data() + i, r);
    }
    for (; i < n; ++i) out[i] = y[i] - c * u[i];
}

}  // namespace confound::kernels::avx2
