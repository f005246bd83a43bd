#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ellsq/model.hpp"

using namespace ellsq;

TEST_CASE("quartic potential fixtures") {
    Potential p = make_poly_potential(4);
    CHECK(p.V(3.0) == doctest::Approx(81.0 / 4.0));
    CHECK(p.dV(3.0) == doctest::Approx(27.0));
    CHECK(p.d2V(3.0) == doctest::Approx(27.0));
    CHECK(p.convex);
}

TEST_CASE("exponential potential fixtures") {
    Potential p = make_exp_potential(1.0);
    CHECK(p.V(0.0) == 1.0);
    for (double y : {-2.0, 0.0, 1.3}) CHECK(p.dV(y) == doctest::Approx(p.V(y)));
    CHECK(p.convex);
}

TEST_CASE("hypothesis report for the quartic with default cutoffs") {
    const Grid g({64, 64}, {32.0, 32.0}, 2);
    Cutoffs cuts{default_cutoff_f(0.2), unit_cutoff_g()};
    HypothesisReport rep = check_hypotheses(make_poly_potential(4), cuts, g, 1.0);
    CHECK(rep.all_pass);
    CHECK(rep.to_json().find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("default cutoff f fixtures") {
    RadialCutoff f = default_cutoff_f(0.2);
    CHECK(f.f_tilde(0.0) == doctest::Approx(std::exp(-0.2)));
    for (double t : {0.0, 1.0, 10.0, 300.0}) {
        CHECK(f.f_tilde_prime(t) <= 0.0);
        const double s = std::sqrt(1.0 + t);
        CHECK(f.f_tilde_prime(t) ==
              doctest::Approx(-(0.2 / (2.0 * s)) * std::exp(-0.2 * s)).epsilon(1e-12));
    }
}

TEST_CASE("Hf discrete Laplacian scan") {
    const Grid g({64, 64}, {32.0, 32.0}, 2);
    CHECK(hf_laplacian_ratio(default_cutoff_f(0.2), g) < 1.0);  // passes at m^2 = 1

    // large-beta failure: beta = m = 1 is rejected on a grid with h = 1
    const Grid gc({32, 32}, {32.0, 32.0}, 2);
    CHECK(hf_laplacian_ratio(default_cutoff_f(1.0), gc) >= 1.0);

    const double beta0 = hf_beta0(gc, 1.0);
    CHECK(beta0 > 0.2);
    CHECK(beta0 < 1.0);
    // acceptance along (0, beta0]
    for (double frac : {0.25, 0.5, 0.75, 1.0})
        CHECK(hf_laplacian_ratio(default_cutoff_f(frac * beta0), gc) < 1.0);
}

TEST_CASE("bump cutoff g vanishes outside its support") {
    SupportCutoff g = bump_cutoff_g(2.0);
    CHECK(g.profile(0.0) == doctest::Approx(1.0));
    CHECK(g.profile(1.99) > 0.0);
    CHECK(g.profile(2.0) == 0.0);
    CHECK(g.profile(5.0) == 0.0);
}

TEST_CASE("alpha_max value") {
    CHECK(alpha_max() == doctest::Approx(13.009664171251275).epsilon(1e-12));
}

TEST_CASE("spec example tuple for alpha = 4pi is admissible") {
    const double alpha = 4.0 * std::numbers::pi;
    const auto sl = exponent_slacks(alpha, 1.45, -0.464, 0.01, 0.55);
    for (double s : sl) CHECK(s > 0.0);
}

TEST_CASE("choose_exponents at representative charges") {
    SUBCASE("alpha = 4pi is feasible with Z near the crossover") {
        ExponentChoice c = choose_exponents(4.0 * std::numbers::pi);
        CHECK(c.feasible);
        CHECK(c.min_slack >= 1e-6);
        for (double s : c.slacks) CHECK(s >= 1e-6);
        CHECK(c.s + 1.0 > 0.25);
        CHECK(c.s + 1.0 < 0.85);
        CHECK(c.r > 1.0);
    }

    SUBCASE("alpha = 13.5 is infeasible") {
        ExponentChoice c = choose_exponents(13.5);
        CHECK_FALSE(c.feasible);
        CHECK_FALSE(c.violated.empty());
    }

    SUBCASE("small alpha is comfortably feasible") {
        ExponentChoice c = choose_exponents(0.1);
        CHECK(c.feasible);
        CHECK(c.min_slack > 5e-3);
    }

    SUBCASE("feasibility is monotone on an alpha grid") {
        bool was_feasible = true;
        for (double a : {2.0, 6.0, 10.0, 12.0, 12.5, 12.9, 13.2, 13.5}) {
            ExponentChoice c = choose_exponents(a);
            if (!was_feasible) CHECK_FALSE(c.feasible);
            was_feasible = c.feasible;
        }
    }

    SUBCASE("returned tuples satisfy all five inequalities with margin") {
        for (double a : {1.0, 4.0, 8.0, 11.0, 12.5}) {
            ExponentChoice c = choose_exponents(a);
            REQUIRE(c.feasible);
            const auto sl = exponent_slacks(a, c.p, c.s, c.delta, c.gamma);
            for (double s : sl) CHECK(s >= 1e-6);
            CHECK(c.p > 1.0);
            CHECK(c.p <= 2.0);
            CHECK(c.s > -1.0);
            CHECK(c.s < 0.0);
            CHECK(c.delta > 0.0);
            CHECK(c.delta < c.s + 1.0);
            CHECK(c.gamma > 0.0);
            CHECK(c.gamma < 1.0);
        }
    }
}

TEST_CASE("non-convex double well is flagged by the convexity probe") {
    Potential dw = make_double_well_potential(1.0);
    CHECK_FALSE(dw.convex);
    CHECK(dw.d2V(0.0) < 0.0);
}
