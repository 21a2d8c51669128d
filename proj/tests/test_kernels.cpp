#include "confound/error.hpp"
#include "confound/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

namespace k = confound::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

// Straight loops, used as the oracle for the scalar table.
double naive_sum(const std::vector<double>& a) {
    long double s = 0;
    for (double x : a) s += x;
    return static_cast<double>(s);
}

double naive_window(const std::vector<double>& x, std::size_t i, std::size_t L) {
    double m = 0.0;
    for (std::size_t j = 1; j < L; ++j) m = std::max(m, std::abs(x[i + j] - x[i]));
    return m;
}

}  // namespace

TEST_CASE("scalar kernels match direct loops") {
    std::mt19937_64 rng(1);
    for (std::size_t n : {0u, 1u, 2u, 5u, 17u, 64u}) {
        auto a = random_vec(rng, n);
        auto b = random_vec(rng, n);
        CHECK(k::scalar::sum(a) == doctest::Approx(naive_sum(a)).epsilon(1e-12));
        long double d = 0;
        for (std::size_t i = 0; i < n; ++i) d += static_cast<long double>(a[i]) * b[i];
        CHECK(k::scalar::dot(a, b) == doctest::Approx(static_cast<double>(d)).epsilon(1e-12));
        for (std::size_t L : {2u, 3u, 7u}) {
            if (n < L) continue;
            std::vector<double> out(n - L + 1);
            k::scalar::window_max_deviation(a, L, out);
            for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == naive_window(a, i, L));
        }
    }
}

TEST_CASE("window deviation hand example") {
    std::vector<double> x{0, 0.01, 0.02, 1.0, 1.0, 1.0};
    std::vector<double> out(4);
    k::scalar::window_max_deviation(x, 3, out);
    CHECK(out[0] == doctest::Approx(0.02));
    CHECK(out[1] == doctest::Approx(0.99));
    CHECK(out[3] == 0.0);
}

TEST_CASE("table lookup") {
    CHECK(k::isa_supported(k::Isa::Scalar));
    CHECK(k::table(k::Isa::Scalar).isa == k::Isa::Scalar);
    CHECK(k::to_string(k::Isa::Scalar) == "scalar");
    if (!k::isa_supported(k::Isa::Avx2)) {
        CHECK_THROWS_AS(k::table(k::Isa::Avx2), confound::Error);
    }
}

TEST_CASE("avx2 kernels agree with scalar") {
    if (!k::isa_supported(k::Isa::Avx2)) {
        MESSAGE("AVX2 unavailable, skipping equivalence");
        return;
    }
    const auto& s = k::table(k::Isa::Scalar);
    const auto& v = k::table(k::Isa::Avx2);
    std::mt19937_64 rng(2);
    for (std::size_t n = 0; n < 80; ++n) {
        auto a = random_vec(rng, n);
        auto b = random_vec(rng, n);
        double scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i]) * (1.0 + std::abs(b[i]));
        CHECK(std::abs(s.sum(a) - v.sum(a)) <= 1e-12 * scale);
        CHECK(std::abs(s.dot(a, b) - v.dot(a, b)) <= 1e-12 * scale);

        std::vector<double> r1(n), r2(n);
        s.residual(a, b, 0.37, r1);
        v.residual(a, b, 0.37, r2);
        CHECK(r1 == r2);

        auto acc1 = random_vec(rng, n);
        auto acc2 = acc1;
        s.max_inplace(acc1, a);
        v.max_inplace(acc2, a);
        CHECK(acc1 == acc2);

        for (std::size_t L : {2u, 3u, 4u, 9u}) {
            if (n < L) continue;
            std::vector<double> o1(n - L + 1), o2(n - L + 1);
            s.window_max_deviation(a, L, o1);
            v.window_max_deviation(a, L, o2);
            CHECK(o1 == o2);
        }
    }
}
