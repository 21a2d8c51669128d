#include "confound/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace confound::kernels::scalar {

double sum(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v;
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void window_max_deviation(std::span<const double> x, std::size_t window_len,
                          std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        double m = 0.0;
        for (std::size_t k = 1; k < window_len; ++k) m = std::max(m, std::fabs(x[i + k] - x[i]));
        out[i] = m;
    }
}

void max_inplace(std::span<double> acc, std::span<const double> v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::max(acc[i], v[i]);
}

void residual(std::span<const double> y, std::span<const double> u, double c,
              std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] - c * u[i];
}

}  // namespace confound::kernels::scalar
