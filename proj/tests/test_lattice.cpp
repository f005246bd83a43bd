#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>

#include "ellsq/fft.hpp"
#include "ellsq/multiplier.hpp"
#include "ellsq/noise.hpp"
#include "ellsq/snapshot.hpp"

using namespace ellsq;

namespace {

RealField random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    RealField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
    return f;
}

// brute-force Green kernel value: (1/vol) sum over the full dual lattice of
// (|k|^2+m^2)^(-q) e^{i k.x}
double green_kernel_direct(const Grid& g, double m2, int q, const std::vector<int>& site) {
    std::complex<double> acc = 0.0;
    std::vector<int> n(g.rank());
    const std::function<void(int)> rec = [&](int axis) {
        if (axis == g.rank()) {
            double k2 = 0.0, phase = 0.0;
            for (int a = 0; a < g.rank(); ++a) {
                const double k = 2.0 * std::numbers::pi * n[a] / g.extent(a);
                k2 += k * k;
                phase += k * site[a] * g.spacing(a);
            }
            double mult = 1.0 / (k2 + m2);
            if (q == 2) mult *= mult;
            acc += mult * std::exp(std::complex<double>(0.0, phase));
            return;
        }
        for (int i = -g.points(axis) / 2; i < g.points(axis) / 2; ++i) {
            n[axis] = i;
            rec(axis + 1);
        }
    };
    rec(0);
    return acc.real() / g.volume();
}

}  // namespace

TEST_CASE("grid invariants") {
    CHECK_THROWS(Grid({3, 4}, {1.0, 1.0}, 2));   // odd count
    CHECK_THROWS(Grid({2, 4}, {1.0, 1.0}, 2));   // too few points
    CHECK_THROWS(Grid({4, 4}, {0.0, 1.0}, 2));   // zero extent
    const Grid g = Grid::xz({8, 8}, {2.0, 2.0}, {4}, {1.0});
    CHECK(g.rank() == 3);
    CHECK(g.n_sites() == 8 * 8 * 4);
    CHECK(g.cell_volume() == doctest::Approx(0.25 * 0.25 * 0.25));
    CHECK(g.frequency(0, 1) == doctest::Approx(std::numbers::pi));
    CHECK(g.frequency(0, 7) == doctest::Approx(-std::numbers::pi));
    CHECK(g.mode_number(0, 4) == -4);
}

TEST_CASE("fft constant field puts everything in the zero mode") {
    const Grid g({8, 8}, {4.0, 4.0}, 2);
    RealField u(g, 1.0);
    SpectralField s = fft_forward(u);
    CHECK(s[0].real() == doctest::Approx(64.0));  // unnormalized forward sum
    CHECK(s[0].imag() == doctest::Approx(0.0));
    double off = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) off = std::max(off, std::abs(s[i]));
    CHECK(off < 1e-12);
}

TEST_CASE("fft round trip on random fields of all supported shapes") {
    for (const Grid& g : {Grid({8, 8}, {4.0, 4.0}, 2),
                          Grid::xz({8, 8}, {4.0, 4.0}, {6}, {3.0}),
                          Grid::xz({6, 8}, {3.0, 4.0}, {4, 6}, {2.0, 3.0}),
                          Grid::zonly({16, 16}, {4.0, 4.0})}) {
        RealField u = random_field(g, 42);
        RealField v = fft_inverse(fft_forward(u));
        double err = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - v[i]));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("parseval against direct summation oracle") {
    const Grid g = Grid::xz({8, 6}, {4.0, 3.0}, {4}, {2.0});
    RealField u = random_field(g, 7);
    double direct = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) direct += u[i] * u[i];
    direct *= g.cell_volume();
    CHECK(spectral_l2_weighted(fft_forward(u)) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("green: constant field maps to c/m^2") {
    const Grid g({8, 8}, {4.0, 4.0}, 2);
    RealField u(g, 3.0);
    RealField v = green_apply(u, {4.0, 1});
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("green: delta response matches brute-force dual-lattice sum") {
    const Grid g({8, 8}, {4.0, 4.0}, 2);
    RealField delta(g);
    delta[0] = 1.0 / g.cell_volume();
    for (int q : {1, 2}) {
        RealField v = green_apply(delta, {1.3, q});
        for (const std::vector<int>& site : {std::vector<int>{0, 0}, {1, 2}, {5, 7}}) {
            const double expect = green_kernel_direct(g, 1.3, q, site);
            const std::size_t flat = g.flatten(site);
            CHECK(v[flat] == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("green: q=2 equals q=1 applied twice") {
    const Grid g = Grid::xz({8, 8}, {4.0, 4.0}, {4}, {2.0});
    RealField u = random_field(g, 3);
    RealField once = green_apply(green_apply(u, {2.0, 1}), {2.0, 1});
    RealField twice = green_apply(u, {2.0, 2});
    double rel = 0.0;
    const double scale = sup_abs(once);
    for (std::size_t i = 0; i < u.size(); ++i)
        rel = std::max(rel, std::abs(once[i] - twice[i]) / scale);
    CHECK(rel < 1e-10);
}

TEST_CASE("green: inverse operator reproduces input") {
    const Grid g({8, 8}, {4.0, 4.0}, 2);
    RealField u = random_field(g, 9);
    RealField v = green_apply(u, {2.5, 2});
    RealField back = inverse_green_multiplier(g, 2.5, 2).convolve(v);
    const double scale = sup_abs(u);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(std::abs(back[i] - u[i]) / scale < 1e-10);
}

TEST_CASE("green: linearity") {
    const Grid g({8, 8}, {4.0, 4.0}, 2);
    RealField u = random_field(g, 1), v = random_field(g, 2);
    RealField lin(g);
    for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = 2.0 * u[i] - 0.5 * v[i];
    RealField glin = green_apply(lin, {1.0, 1});
    RealField gu = green_apply(u, {1.0, 1});
    RealField gv = green_apply(v, {1.0, 1});
    for (std::size_t i = 0; i < lin.size(); ++i)
        CHECK(std::abs(glin[i] - (2.0 * gu[i] - 0.5 * gv[i])) < 1e-12);
}

TEST_CASE("green: positivity improving on nonnegative fields") {
    const Grid g({8, 8}, {4.0, 4.0}, 2);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    RealField u(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = dist(rng) < 0.2 ? dist(rng) : 0.0;
    u[5] = 1.0;  // ensure u not identically zero
    RealField v = green_apply(u, {1.0, 1});
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] > 0.0);
}

TEST_CASE("green: translation equivariance under periodic shifts") {
    const Grid g({8, 8}, {4.0, 4.0}, 2);
    RealField u = random_field(g, 17);
    const int sx = 3, sy = 5;
    RealField shifted(g);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            shifted[g.flatten({(i + sx) % 8, (j + sy) % 8})] = u[g.flatten({i, j})];
    RealField a = green_apply(shifted, {1.0, 1});
    RealField gu = green_apply(u, {1.0, 1});
    RealField b(g);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            b[g.flatten({(i + sx) % 8, (j + sy) % 8})] = gu[g.flatten({i, j})];
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-11);
}

TEST_CASE("restriction to the x=0 slice") {
    const Grid g = Grid::xz({8, 8}, {4.0, 4.0}, {6}, {3.0});

    SUBCASE("separable field") {
        RealField u(g);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                for (int k = 0; k < 6; ++k)
                    u[g.flatten({i, j, k})] = (1.0 + i + 2 * j) * std::sin(0.5 + k);
        RealField s = restrict_to_origin(u);
        CHECK(s.grid().rank() == 1);
        CHECK(s.grid().n_x_axes() == 0);
        for (int k = 0; k < 6; ++k) CHECK(s[k] == doctest::Approx(1.0 * std::sin(0.5 + k)));
    }

    SUBCASE("constant field") {
        RealField u(g, 2.5);
        RealField s = restrict_to_origin(u);
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == 2.5);
    }

    SUBCASE("random field equals direct indexing") {
        RealField u = random_field(g, 23);
        RealField s = restrict_to_origin(u);
        for (int k = 0; k < 6; ++k) CHECK(s[k] == u[g.flatten({0, 0, k})]);
    }

    SUBCASE("d=0 restriction yields a single point") {
        const Grid gx({8, 8}, {4.0, 4.0}, 2);
        RealField u = random_field(gx, 2);
        RealField s = restrict_to_origin(u);
        CHECK(s.size() == 1);
        CHECK(s[0] == u[0]);
    }
}

TEST_CASE("snapshot round trip and validation") {
    const Grid g = Grid::xz({8, 6}, {4.0, 3.0}, {4}, {2.0});
    RealField u = random_field(g, 31);
    const std::string path = "test_snapshot.fld";
    write_snapshot(path, u);
    RealField v = read_snapshot(path);
    CHECK(v.grid() == g);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == v[i]);

    // corrupt the magic
    {
        FILE* f = std::fopen(path.c_str(), "r+b");
        std::fputc('X', f);
        std::fclose(f);
        CHECK_THROWS(read_snapshot(path));
    }
    std::remove(path.c_str());
}

TEST_CASE("restriction slice is the leading memory block") {
    // layout assumption behind restrict_to_origin
    const Grid g = Grid::xz({4, 4}, {2.0, 2.0}, {4, 4}, {2.0, 2.0});
    RealField u = random_field(g, 3);
    RealField s = restrict_to_origin(u);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK(s[s.grid().flatten({a, b})] == u[g.flatten({0, 0, a, b})]);
}
