#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ellsq/besov.hpp"

using namespace ellsq;

namespace {

RealField random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    RealField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
    return f;
}

RealField pure_mode(const Grid& g, const std::vector<int>& mode) {
    RealField f(g);
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.n_sites(); ++i) {
        g.unflatten(i, idx);
        double phase = 0.0;
        for (int a = 0; a < g.rank(); ++a)
            phase += 2.0 * std::numbers::pi * mode[a] * idx[a] / g.points(a);
        f[i] = std::cos(phase);
    }
    return f;
}

}  // namespace

TEST_CASE("partition of unity closes on the lattice") {
    for (const Grid& g : {Grid({16, 16}, {8.0, 8.0}, 2),
                          Grid::xz({12, 12}, {3.0, 3.0}, {8, 8}, {2.0, 2.0})}) {
        DyadicPartition part(g);
        CHECK(part.partition_defect() < 1e-10);
        RealField u = random_field(g, 5);
        RealField sum(g);
        for (int j = -1; j <= part.top_block(); ++j) axpy(1.0, part.block(u, j), sum);
        double err = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            err = std::max(err, std::abs(sum[i] - u[i]));
        CHECK(err < 1e-8);
    }
}

TEST_CASE("window supports honor the annulus geometry") {
    const Grid g({32, 32}, {8.0, 8.0}, 2);
    DyadicPartition part(g);
    // chi vanishes beyond 4/3, phi_j vanishes outside (3/4 2^j, 8/3 2^j)
    for (int j = 0; j <= part.top_block(); ++j) {
        const auto& w = part.window(j);
        spectral_for_each(g, [&](std::size_t i, double k2, double) {
            const double r = std::sqrt(k2);
            if (w.values()[i] != 0.0) {
                CHECK(r > 0.75 * std::pow(2.0, j));
                CHECK(r < (8.0 / 3.0) * std::pow(2.0, j));
            }
        });
    }
    // block quasi-orthogonality: |i-j| >= 2 -> disjoint spectral supports
    for (int j = -1; j <= part.top_block(); ++j)
        for (int i = j + 2; i <= part.top_block(); ++i) {
            const auto& wi = part.window(i);
            const auto& wj = part.window(j);
            for (std::size_t m = 0; m < wi.size(); ++m)
                CHECK(wi.values()[m] * wj.values()[m] == 0.0);
        }
}

TEST_CASE("constant field lives in block -1") {
    const Grid g({16, 16}, {8.0, 8.0}, 2);
    DyadicPartition part(g);
    RealField u(g, 3.0);
    RealField b = part.block(u, -1);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == doctest::Approx(3.0).epsilon(1e-12));
    for (int j = 0; j <= part.top_block(); ++j)
        CHECK(sup_abs(part.block(u, j)) < 1e-12);
}

TEST_CASE("single dual mode concentrates in adjacent blocks") {
    const Grid g({32, 32}, {8.0, 8.0}, 2);
    DyadicPartition part(g);
    // mode (8, 0): |k| = 2 pi 8 / 8 = 2 pi, should sit around block j with
    // 2^j ~ 2pi: j = 2..3
    RealField u = pure_mode(g, {8, 0});
    const double total = std::sqrt(kernels::ops().sum_sq(u.data(), u.size()));
    double outside = 0.0;
    for (int j = -1; j <= part.top_block(); ++j) {
        RealField b = part.block(u, j);
        const double mass = std::sqrt(kernels::ops().sum_sq(b.data(), b.size()));
        if (j < 2 || j > 3) outside = std::max(outside, mass);
    }
    CHECK(outside < 1e-10 * total);
}

TEST_CASE("besov norm basics") {
    const Grid g({16, 16}, {8.0, 8.0}, 2);
    DyadicPartition part(g);
    BesovParams params{-0.5, 1.45, 1.45, 3.0};

    SUBCASE("zero field has zero norm") {
        CHECK(besov_norm(part, RealField(g, 0.0), params) == 0.0);
    }

    SUBCASE("homogeneity under scalar multiplication") {
        RealField u = random_field(g, 8);
        const double n1 = besov_norm(part, u, params);
        scale(2.0, u);
        CHECK(besov_norm(part, u, params) == doctest::Approx(2.0 * n1).epsilon(1e-12));
    }

    SUBCASE("pure mode has the closed-form norm") {
        // Delta_j of a pure cosine mode is w_j(k) times the mode, so the norm
        // is (sum_j (2^{sj} w_j(k))^q)^{1/q} ||u||_{p,l}
        const std::vector<int> mode = {4, 2};
        RealField u = pure_mode(g, mode);
        double k2 = 0.0;
        for (int a = 0; a < 2; ++a) {
            const double k = g.frequency(a, mode[a]);
            k2 += k * k;
        }
        const double lp = weighted_lp_norm(u, params.p, params.ell);
        double acc = 0.0;
        for (int j = -1; j <= part.top_block(); ++j) {
            double w = 0.0;
            if (j == -1)
                w = DyadicPartition::chi_profile(std::sqrt(k2));
            else {
                const double r = std::pow(2.0, -j) * std::sqrt(k2);
                w = DyadicPartition::chi_profile(0.5 * r) - DyadicPartition::chi_profile(r);
            }
            acc += std::pow(std::pow(2.0, params.s * j) * w * lp, params.q);
        }
        const double expect = std::pow(acc, 1.0 / params.q);
        CHECK(besov_norm(part, u, params) == doctest::Approx(expect).epsilon(1e-9));
    }

    SUBCASE("monotone in s for fields with no block -1 content") {
        RealField u = pure_mode(g, {6, 3});  // |k| ~ 5.3 > 4/3
        CHECK(sup_abs(part.block(u, -1)) < 1e-12);
        BesovParams lo = params, hi = params;
        lo.s = -0.8;
        hi.s = -0.2;
        CHECK(besov_norm(part, u, lo) <= besov_norm(part, u, hi));
    }

    SUBCASE("out of range block throws") {
        CHECK_THROWS(part.block(RealField(g), part.top_block() + 1));
        CHECK_THROWS(part.block(RealField(g), -2));
    }
}

TEST_CASE("regularity study: alpha = 0 is epsilon-independent") {
    const Grid g = Grid::xz({8, 8}, {4.0, 4.0}, {8, 8}, {4.0, 4.0});
    GmcRegularityStudy study = gmc_regularity_study(
        g, 1.0, 0.0, {1.0, 0.5, 0.25}, {BesovParams{-0.464, 1.45, 1.45, 3.0}}, 8, 7);
    REQUIRE(study.rows.size() == 3);
    // eta is exactly the Lebesgue density 1 for every rung
    for (const auto& r : study.rows) {
        CHECK(r.norm_mean == doctest::Approx(study.rows[0].norm_mean).epsilon(1e-12));
        CHECK(r.norm_err == doctest::Approx(0.0));
        CHECK(r.cauchy_gap == doctest::Approx(0.0));
    }
}

TEST_CASE("regularity study: norms bounded and gaps decreasing at alpha = 4pi") {
    // desk-scale version of the acceptance criterion on a small grid
    const Grid g = Grid::xz({12, 12}, {3.0, 3.0}, {12, 12}, {3.0, 3.0});
    const double alpha = 4.0 * std::numbers::pi;
    GmcRegularityStudy study = gmc_regularity_study(
        g, 1.0, alpha, {0.5, 0.25, 0.125}, {BesovParams{-0.464, 1.45, 1.45, 3.0}}, 48, 11);
    REQUIRE(study.rows.size() == 3);
    double lo = 1e300, hi = 0.0;
    for (const auto& r : study.rows) {
        lo = std::min(lo, r.norm_mean);
        hi = std::max(hi, r.norm_mean);
    }
    CHECK(hi / lo < 2.0);
    CHECK(study.rows[1].cauchy_gap < study.rows[0].cauchy_gap);
}
