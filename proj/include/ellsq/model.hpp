#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ellsq/field.hpp"

namespace ellsq {

// Scalar potential with first and second derivatives plus the convexity and
// growth metadata the hypothesis checkers need. The QC majorant is supplied
// analytically for the built-in families; user potentials fall back to a
// probe-grid check labeled "empirical".
struct Potential {
    enum class Growth { polynomial, exponential, none };

    std::function<double(double)> V;
    std::function<double(double)> dV;
    std::function<double(double)> d2V;
    bool convex = false;
    Growth growth = Growth::none;
    double growth_param = 0.0;  // polynomial degree 2n, or exponential rate alpha
    std::function<double(double)> qc_majorant;  // H(y); empty => probe-only
    std::string name;
};

Potential make_poly_potential(int degree);           // y^{2n}/(2n), degree = 2n
Potential make_exp_potential(double alpha);          // exp(alpha y)
Potential make_zero_potential();
Potential make_quadratic_potential(double mu);       // mu y^2 / 2
Potential make_double_well_potential(double a);      // (y^2 - a^2)^2 / 4, non-convex

// Radial spatial cutoff f(x) = ftilde(|x|^2) over the x-plane. ftilde_prime
// is the derivative in the |x|^2 variable; the weight functional can be
// configured to read either that derivative or the |x|-derivative.
struct RadialCutoff {
    std::function<double(double)> f_tilde;        // t = |x|^2
    std::function<double(double)> f_tilde_prime;  // d/dt
    double beta = 0.0;                            // decay rate of the default family
    std::string name;
};

// omega_beta(x) = exp(-beta sqrt(1+|x|^2))
RadialCutoff default_cutoff_f(double beta);
RadialCutoff constant_cutoff_f();  // f == 1 (ftilde' == 0)

// Compactly supported smooth bump over the z-coordinates.
struct SupportCutoff {
    std::function<double(double)> profile;  // |z| -> value, 0 for |z| >= radius
    double support_radius = 0.0;
    std::string name;
};

SupportCutoff bump_cutoff_g(double radius);  // exp(1 - 1/(1-(|z|/R)^2))
SupportCutoff unit_cutoff_g();               // g == 1 (compact tori)

struct Cutoffs {
    RadialCutoff f;
    SupportCutoff g;
};

// evaluations on grids (periodic minimum-image distance from the origin)
RealField eval_f(const RadialCutoff& f, const Grid& g);        // over x-axes, constant in z
RealField eval_f_prime(const RadialCutoff& f, const Grid& g);  // ftilde'(|x|^2), constant in z
RealField eval_g(const SupportCutoff& gcut, const Grid& g);    // over z-axes, constant in x

// --- hypothesis checkers -------------------------------------------------

struct HypothesisItem {
    std::string name;
    bool pass = false;
    double worst_margin = 0.0;  // positive = slack, negative = violation
    std::string note;
};

struct HypothesisReport {
    std::vector<HypothesisItem> items;
    bool all_pass = false;
    std::string to_json() const;
};

// sup over grid sites of (discrete Laplacian of f)/f; the Hf bound requires
// this below m^2
double hf_laplacian_ratio(const RadialCutoff& f, const Grid& x_grid);
// largest beta whose omega_beta passes the Hf check on this grid, by bisection
double hf_beta0(const Grid& x_grid, double m2);

HypothesisReport check_hypotheses(const Potential& V, const Cutoffs& cuts, const Grid& grid,
                                  double m2);

// --- Liouville exponent feasibility --------------------------------------

// Feasible (p, s, delta, gamma) for a given charge alpha, maximizing the
// minimum normalized constraint slack over a deterministic grid search with
// coordinate refinement. r is the derived product-space index.
struct ExponentChoice {
    double alpha = 0.0;
    double p = 0.0, s = 0.0, delta = 0.0, gamma = 0.0, r = 0.0;
    bool feasible = false;
    double min_slack = 0.0;
    std::string violated;  // name of the binding constraint when infeasible
    std::array<double, 5> slacks{};  // growth, gamma-window, product, p-bound, s-bound
};

double alpha_max();  // 4 sqrt(8 - 4 sqrt(3)) pi

// the five inequalities evaluated at an explicit tuple; slack > 0 for all
// means admissible
std::array<double, 5> exponent_slacks(double alpha, double p, double s, double delta,
                                      double gamma);

ExponentChoice choose_exponents(double alpha);

}  // namespace ellsq
