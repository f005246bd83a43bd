#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "ellsq/kernels.hpp"

using namespace ellsq;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 64, 1000, 4097};

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

// The SIMD backends promise bit-identical results to the scalar reference
// (no fp contraction, same reduction blocking). Verify exactly, not within
// a tolerance.
TEST_CASE("dispatched backend matches scalar bit for bit") {
    const auto& dispatched = kernels::ops();
    const auto& scalar = kernels::scalar_ops();
    INFO("active backend: ", kernels::active_backend());

    for (std::size_t n : kSizes) {
        auto x = random_vec(n, 11 + n);
        auto y = random_vec(n, 23 + n);

        SUBCASE("") {
            auto y1 = y, y2 = y;
            dispatched.axpy(1.7, x.data(), y1.data(), n);
            scalar.axpy(1.7, x.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(y1[i], y2[i]));

            auto s1 = x, s2 = x;
            dispatched.scale(-0.3, s1.data(), n);
            scalar.scale(-0.3, s2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(s1[i], s2[i]));

            auto m1 = y, m2 = y;
            dispatched.mul(x.data(), m1.data(), n);
            scalar.mul(x.data(), m2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(m1[i], m2[i]));

            std::vector<double> z1(n), z2(n);
            dispatched.mul_to(x.data(), y.data(), z1.data(), n);
            scalar.mul_to(x.data(), y.data(), z2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(z1[i], z2[i]));

            auto h = random_vec(n, 31 + n);
            std::vector<double> o1(n), o2(n);
            dispatched.hermite_step(x.data(), y.data(), h.data(), 2.5, o1.data(), n);
            scalar.hermite_step(x.data(), y.data(), h.data(), 2.5, o2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(o1[i], o2[i]));

            CHECK(bit_equal(dispatched.sum(x.data(), n), scalar.sum(x.data(), n)));
            CHECK(bit_equal(dispatched.dot(x.data(), y.data(), n),
                            scalar.dot(x.data(), y.data(), n)));
            CHECK(bit_equal(dispatched.sum_sq(x.data(), n), scalar.sum_sq(x.data(), n)));
            CHECK(bit_equal(dispatched.sup_abs(x.data(), n), scalar.sup_abs(x.data(), n)));
            CHECK(bit_equal(dispatched.max(x.data(), n), scalar.max(x.data(), n)));

            std::vector<std::complex<double>> c1(n), c2(n);
            for (std::size_t i = 0; i < n; ++i) c1[i] = c2[i] = {x[i], y[i]};
            dispatched.complex_mul_real(x.data(), c1.data(), n);
            scalar.complex_mul_real(x.data(), c2.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(bit_equal(c1[i].real(), c2[i].real()));
                CHECK(bit_equal(c1[i].imag(), c2[i].imag()));
            }
        }
    }
}

TEST_CASE("kernel semantics against naive references") {
    const auto& ops = kernels::ops();
    const std::size_t n = 1000;
    auto x = random_vec(n, 5);
    auto y = random_vec(n, 6);

    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<long double>(x[i]) * y[i];
    CHECK(ops.dot(x.data(), y.data(), n) ==
          doctest::Approx(static_cast<double>(acc)).epsilon(1e-13));

    acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    CHECK(ops.sum(x.data(), n) == doctest::Approx(static_cast<double>(acc)).epsilon(1e-13));

    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    CHECK(ops.sup_abs(x.data(), n) == m);

    auto y2 = y;
    ops.axpy(2.0, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == y[i] + 2.0 * x[i]);
}

TEST_CASE("force_backend") {
    kernels::force_backend("scalar");
    CHECK(std::string(kernels::active_backend()) == "scalar");
    CHECK_THROWS_AS(kernels::force_backend("no-such-backend"), std::invalid_argument);
    kernels::force_backend("auto");
#if defined(__x86_64__)
    if (kernels::avx2_available()) CHECK(std::string(kernels::active_backend()) == "avx2");
#endif
}
