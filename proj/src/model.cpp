#include "ellsq/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ellsq {

Potential make_poly_potential(int degree) {
    if (degree < 2 || degree % 2 != 0)
        throw std::invalid_argument("poly potential: degree must be even and >= 2");
    Potential p;
    const double n2 = degree;
    p.V = [n2](double y) { return std::pow(y, n2) / n2; };
    p.dV = [n2](double y) { return std::pow(y, n2 - 1.0); };
    p.d2V = [n2](double y) { return (n2 - 1.0) * std::pow(y, n2 - 2.0); };
    p.convex = true;
    p.growth = Potential::Growth::polynomial;
    p.growth_param = n2;
    // for even monomials, -sign(nhat) V'(y + r nhat) <= |y|^{2n-1} + 1
    p.qc_majorant = [n2](double y) { return std::pow(std::abs(y), n2 - 1.0) + 1.0; };
    std::ostringstream os;
    os << "poly" << degree;
    p.name = os.str();
    return p;
}

Potential make_exp_potential(double alpha) {
    if (alpha == 0.0) throw std::invalid_argument("exp potential: alpha must be nonzero");
    Potential p;
    p.V = [alpha](double y) { return std::exp(alpha * y); };
    p.dV = [alpha](double y) { return alpha * std::exp(alpha * y); };
    p.d2V = [alpha](double y) { return alpha * alpha * std::exp(alpha * y); };
    p.convex = true;
    p.growth = Potential::Growth::exponential;
    p.growth_param = alpha;
    p.qc_majorant = [alpha](double y) { return std::abs(alpha) * std::exp(alpha * y); };
    std::ostringstream os;
    os << "exp(" << alpha << ")";
    p.name = os.str();
    return p;
}

Potential make_zero_potential() {
    Potential p;
    p.V = [](double) { return 0.0; };
    p.dV = [](double) { return 0.0; };
    p.d2V = [](double) { return 0.0; };
    p.convex = true;
    p.growth = Potential::Growth::polynomial;
    p.growth_param = 0.0;
    p.qc_majorant = [](double) { return 0.0; };
    p.name = "zero";
    return p;
}

Potential make_quadratic_potential(double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("quadratic potential: mu must be >= 0");
    Potential p;
    p.V = [mu](double y) { return 0.5 * mu * y * y; };
    p.dV = [mu](double y) { return mu * y; };
    p.d2V = [mu](double) { return mu; };
    p.convex = true;
    p.growth = Potential::Growth::polynomial;
    p.growth_param = 2.0;
    p.qc_majorant = [mu](double y) { return mu * (std::abs(y) + 1.0); };
    p.name = "quadratic";
    return p;
}

Potential make_double_well_potential(double a) {
    Potential p;
    const double a2 = a * a;
    p.V = [a2](double y) { return 0.25 * (y * y - a2) * (y * y - a2); };
    p.dV = [a2](double y) { return y * (y * y - a2); };
    p.d2V = [a2](double y) { return 3.0 * y * y - a2; };
    p.convex = false;
    p.growth = Potential::Growth::polynomial;
    p.growth_param = 4.0;
    p.qc_majorant = [a2](double y) {
        return std::pow(std::abs(y), 3.0) + a2 * std::abs(y) + 1.0;
    };
    p.name = "double-well";
    return p;
}

RadialCutoff default_cutoff_f(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("cutoff f: beta must be positive");
    RadialCutoff c;
    c.beta = beta;
    c.f_tilde = [beta](double t) { return std::exp(-beta * std::sqrt(1.0 + t)); };
    c.f_tilde_prime = [beta](double t) {
        const double s = std::sqrt(1.0 + t);
        return -(beta / (2.0 * s)) * std::exp(-beta * s);
    };
    std::ostringstream os;
    os << "omega_" << beta;
    c.name = os.str();
    return c;
}

RadialCutoff constant_cutoff_f() {
    RadialCutoff c;
    c.beta = 0.0;
    c.f_tilde = [](double) { return 1.0; };
    c.f_tilde_prime = [](double) { return 0.0; };
    c.name = "one";
    return c;
}

SupportCutoff bump_cutoff_g(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("cutoff g: radius must be positive");
    SupportCutoff c;
    c.support_radius = radius;
    c.profile = [radius](double r) {
        const double u = r / radius;
        if (u >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - u * u));
    };
    std::ostringstream os;
    os << "bump_" << radius;
    c.name = os.str();
    return c;
}

SupportCutoff unit_cutoff_g() {
    SupportCutoff c;
    c.support_radius = std::numeric_limits<double>::infinity();
    c.profile = [](double) { return 1.0; };
    c.name = "one";
    return c;
}

namespace {

double x_radius_sq(const Grid& g, const std::vector<int>& idx) {
    double t = 0.0;
    for (int a = 0; a < g.n_x_axes(); ++a) {
        const double d = g.displacement(a, idx[a]);
        t += d * d;
    }
    return t;
}

double z_radius(const Grid& g, const std::vector<int>& idx) {
    double t = 0.0;
    for (int a = g.n_x_axes(); a < g.rank(); ++a) {
        const double d = g.displacement(a, idx[a]);
        t += d * d;
    }
    return std::sqrt(t);
}

}  // namespace

RealField eval_f(const RadialCutoff& f, const Grid& g) {
    RealField out(g);
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.n_sites(); ++i) {
        g.unflatten(i, idx);
        out[i] = f.f_tilde(x_radius_sq(g, idx));
    }
    return out;
}

RealField eval_f_prime(const RadialCutoff& f, const Grid& g) {
    RealField out(g);
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.n_sites(); ++i) {
        g.unflatten(i, idx);
        out[i] = f.f_tilde_prime(x_radius_sq(g, idx));
    }
    return out;
}

RealField eval_g(const SupportCutoff& gcut, const Grid& g) {
    RealField out(g);
    std::vector<int> idx;
    for (std::int64_t i = 0; i < g.n_sites(); ++i) {
        g.unflatten(i, idx);
        out[i] = gcut.profile(z_radius(g, idx));
    }
    return out;
}

double hf_laplacian_ratio(const RadialCutoff& f, const Grid& x_grid) {
    if (x_grid.n_x_axes() != 2 || x_grid.rank() != 2)
        throw std::invalid_argument("hf check runs on a 2-d x-grid");
    RealField F = eval_f(f, x_grid);
    const int nx = x_grid.points(0), ny = x_grid.points(1);
    const double hx2 = x_grid.spacing(0) * x_grid.spacing(0);
    const double hy2 = x_grid.spacing(1) * x_grid.spacing(1);
    double worst = -std::numeric_limits<double>::infinity();
    // The minimum-image embedding of a radial profile has a ridge on the
    // seam planes (index N/2), where the stencil straddles the fold. The
    // hypothesis concerns the plane, so those sites are skipped.
    for (int i = 0; i < nx; ++i) {
        if (i == nx / 2) continue;
        for (int j = 0; j < ny; ++j) {
            if (j == ny / 2) continue;
            const double c = F[x_grid.flatten({i, j})];
            const double lap =
                (F[x_grid.flatten({(i + 1) % nx, j})] - 2.0 * c +
                 F[x_grid.flatten({(i + nx - 1) % nx, j})]) / hx2 +
                (F[x_grid.flatten({i, (j + 1) % ny})] - 2.0 * c +
                 F[x_grid.flatten({i, (j + ny - 1) % ny})]) / hy2;
            worst = std::max(worst, lap / c);
        }
    }
    return worst;
}

double hf_beta0(const Grid& x_grid, double m2) {
    double lo = 1e-4, hi = 4.0 * std::sqrt(m2);
    if (hf_laplacian_ratio(default_cutoff_f(lo), x_grid) >= m2) return 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hf_laplacian_ratio(default_cutoff_f(mid), x_grid) < m2)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

void check_potential(const Potential& V, std::vector<HypothesisItem>& items) {
    // positivity and convexity on a probe grid
    double worst_pos = std::numeric_limits<double>::infinity();
    double worst_cvx = std::numeric_limits<double>::infinity();
    for (int i = -80; i <= 80; ++i) {
        const double y = 0.1 * i;
        worst_pos = std::min(worst_pos, V.V(y));
        worst_cvx = std::min(worst_cvx, V.d2V(y));
    }
    items.push_back({"C: V >= 0 on probes", worst_pos >= 0.0, worst_pos, ""});
    if (V.convex)
        items.push_back({"C: V'' >= 0 on probes", worst_cvx >= 0.0, worst_cvx, ""});

    // QC: -nhat V'(y + r nhat) <= H(y) for nhat = +-1 on a (y, r) probe grid
    if (V.qc_majorant) {
        double worst = std::numeric_limits<double>::infinity();
        for (int i = -40; i <= 40; ++i)
            for (int j = 0; j <= 40; ++j) {
                const double y = 0.2 * i;
                const double r = 0.25 * j;
                const double h = V.qc_majorant(y);
                worst = std::min(worst, h + V.dV(y + r));   // nhat = +1
                worst = std::min(worst, h - V.dV(y - r));   // nhat = -1
            }
        items.push_back({"QC: -n.dV(y+rn) <= H(y)", worst >= 0.0, worst,
                         V.qc_majorant ? "analytic majorant" : "empirical"});
    }
}

}  // namespace

HypothesisReport check_hypotheses(const Potential& V, const Cutoffs& cuts, const Grid& grid,
                                  double m2) {
    HypothesisReport rep;
    check_potential(V, rep.items);

    // Hf: sign conditions and the Laplacian-ratio bound on the x-grid
    {
        double worst_f = std::numeric_limits<double>::infinity();
        double worst_fp = std::numeric_limits<double>::infinity();
        const double max_t = 0.25 * (grid.extent(0) * grid.extent(0) +
                                     (grid.rank() > 1 ? grid.extent(1) * grid.extent(1) : 0.0));
        for (int i = 0; i <= 200; ++i) {
            const double t = max_t * i / 200.0;
            worst_f = std::min(worst_f, cuts.f.f_tilde(t));
            worst_fp = std::min(worst_fp, -cuts.f.f_tilde_prime(t));
        }
        rep.items.push_back({"Hf: f >= 0", worst_f >= 0.0, worst_f, ""});
        rep.items.push_back({"Hf: ftilde' <= 0", worst_fp >= 0.0, worst_fp, ""});

        if (grid.n_x_axes() == 2) {
            const Grid xg({grid.points(0), grid.points(1)}, {grid.extent(0), grid.extent(1)}, 2);
            const double b2 = hf_laplacian_ratio(cuts.f, xg);
            rep.items.push_back(
                {"Hf: discrete Laplacian ratio < m^2", b2 < m2, m2 - b2, "b2 = " + std::to_string(b2)});

            // Hf1 ratio bounds |D^a f| <= e f for |a| <= 2, reported not gated
            RealField F = eval_f(cuts.f, xg);
            const int nx = xg.points(0), ny = xg.points(1);
            const double hx = xg.spacing(0), hy = xg.spacing(1);
            double e_emp = 0.0;
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j) {
                    const double c = F[xg.flatten({i, j})];
                    const double fx = (F[xg.flatten({(i + 1) % nx, j})] -
                                       F[xg.flatten({(i + nx - 1) % nx, j})]) / (2 * hx);
                    const double fy = (F[xg.flatten({i, (j + 1) % ny})] -
                                       F[xg.flatten({i, (j + ny - 1) % ny})]) / (2 * hy);
                    const double fxx = (F[xg.flatten({(i + 1) % nx, j})] - 2 * c +
                                        F[xg.flatten({(i + nx - 1) % nx, j})]) / (hx * hx);
                    const double fyy = (F[xg.flatten({i, (j + 1) % ny})] - 2 * c +
                                        F[xg.flatten({i, (j + ny - 1) % ny})]) / (hy * hy);
                    for (double d : {fx, fy, fxx, fyy}) e_emp = std::max(e_emp, std::abs(d) / c);
                }
            rep.items.push_back({"Hf1: |D^a f| <= e f (report)", true, e_emp,
                                 "e = " + std::to_string(e_emp)});
        }
    }

    // Hg: nonnegative, vanishing outside the declared support
    {
        double worst_pos = std::numeric_limits<double>::infinity();
        double worst_supp = std::numeric_limits<double>::infinity();
        const Grid zg = grid.z_slice();
        std::vector<int> idx;
        for (std::int64_t i = 0; i < zg.n_sites(); ++i) {
            zg.unflatten(i, idx);
            double r2 = 0.0;
            for (int a = 0; a < zg.rank(); ++a) {
                const double d = zg.displacement(a, idx[a]);
                r2 += d * d;
            }
            const double val = cuts.g.profile(std::sqrt(r2));
            worst_pos = std::min(worst_pos, val);
            if (std::sqrt(r2) >= cuts.g.support_radius)
                worst_supp = std::min(worst_supp, -std::abs(val));
        }
        rep.items.push_back({"Hg: g >= 0", worst_pos >= 0.0, worst_pos, ""});
        rep.items.push_back({"Hg: supp(g) within radius",
                             worst_supp == std::numeric_limits<double>::infinity() || worst_supp >= 0.0,
                             worst_supp == std::numeric_limits<double>::infinity() ? 0.0 : worst_supp,
                             ""});
    }

    rep.all_pass = true;
    for (const auto& it : rep.items) rep.all_pass = rep.all_pass && it.pass;
    return rep;
}

std::string HypothesisReport::to_json() const {
    std::ostringstream os;
    os << "{\n  \"all_pass\": " << (all_pass ? "true" : "false") << ",\n  \"items\": [\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
        os << "    {\"name\": \"" << items[i].name << "\", \"pass\": "
           << (items[i].pass ? "true" : "false") << ", \"worst_margin\": " << items[i].worst_margin;
        if (!items[i].note.empty()) os << ", \"note\": \"" << items[i].note << "\"";
        os << "}" << (i + 1 < items.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

// --- exponent feasibility -------------------------------------------------

double alpha_max() {
    return 4.0 * std::sqrt(8.0 - 4.0 * std::sqrt(3.0)) * std::numbers::pi;
}

std::array<double, 5> exponent_slacks(double alpha, double p, double s, double delta,
                                      double gamma) {
    const double fourpi2 = std::pow(4.0 * std::numbers::pi, 2);
    const double ar = alpha * alpha / fourpi2;
    std::array<double, 5> sl{};
    sl[0] = (2.0 + s - delta) * (p - 1.0) / p + s;                   // growth pairing
    sl[1] = std::min(gamma - (s + 1.0) / (1.0 - delta), 1.0 - gamma); // gamma window
    sl[2] = (p - 1.0) - (1.0 - (s + 1.0) * p / 4.0) * gamma;          // product space
    sl[3] = 2.0 / ar - p;                                             // moment bound on p
    sl[4] = -std::max(ar * (p - 1.0), p - 1.0) - s;                   // regularity of s
    return sl;
}

namespace {

const char* kConstraintNames[5] = {
    "growth pairing (2+s-delta)(p-1)/p + s > 0",
    "gamma window (s+1)/(1-delta) < gamma < 1",
    "product space (1-(s+1)p/4) gamma < p-1",
    "p < 2 (4pi)^2 / alpha^2",
    "s < -max(alpha^2 (p-1)/(4pi)^2, p-1)",
};

struct EvalResult {
    double min_slack;
    int binding;
};

// ranges enter the objective too, so the optimum stays strictly interior
EvalResult eval_tuple(double alpha, double Z, double k, double delta, double gamma) {
    const double p = 1.0 + k;
    const double s = Z - 1.0;
    EvalResult r{-std::numeric_limits<double>::infinity(), -1};
    if (!(Z > 0.0 && Z < 1.0 && k > 0.0 && p <= 2.0 && delta > 0.0 && delta < Z &&
          gamma > 0.0 && gamma < 1.0))
        return {-1.0, -1};
    const auto sl = exponent_slacks(alpha, p, s, delta, gamma);
    r.min_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 5; ++i)
        if (sl[i] < r.min_slack) {
            r.min_slack = sl[i];
            r.binding = i;
        }
    // keep the tuple strictly inside its box
    const double range_slack =
        std::min({Z, 1.0 - Z, k, 2.0 - p + 1e-3, delta, Z - delta});
    if (range_slack < r.min_slack) r.min_slack = std::min(r.min_slack, range_slack);
    return r;
}

}  // namespace

ExponentChoice choose_exponents(double alpha) {
    if (alpha == 0.0) throw std::invalid_argument("choose_exponents: alpha must be nonzero");
    ExponentChoice best;
    best.alpha = alpha;
    best.min_slack = -std::numeric_limits<double>::infinity();

    double bZ = 0, bk = 0, bd = 0, bg = 0;
    int binding = -1;

    const auto consider = [&](double Z, double k, double delta, double gamma) {
        const EvalResult r = eval_tuple(alpha, Z, k, delta, gamma);
        if (r.min_slack > best.min_slack) {
            best.min_slack = r.min_slack;
            bZ = Z;
            bk = k;
            bd = delta;
            bg = gamma;
            binding = r.binding;
        }
    };

    const double fourpi2 = std::pow(4.0 * std::numbers::pi, 2);
    const double ar = alpha * alpha / fourpi2;

    const auto gamma_mid = [](double Z, double k, double delta) {
        const double glo = Z / (1.0 - delta);
        const double ghi = std::min(1.0, k / (1.0 - Z * (k + 1.0) / 4.0));
        const double gamma = glo < ghi ? 0.5 * (glo + ghi) : 0.5 * (glo + 1.0);
        return std::clamp(gamma, 1e-4, 1.0 - 1e-4);
    };

    // coarse deterministic grid
    const double deltas[] = {1e-4, 1e-3, 5e-3, 0.01, 0.02, 0.05, 0.1, 0.2};
    for (double delta : deltas)
        for (int zi = 1; zi < 64; ++zi) {
            const double Z = zi / 64.0;
            if (delta >= Z) continue;
            for (int ki = 1; ki <= 64; ++ki) {
                const double k = ki / 64.0;
                consider(Z, k, delta, gamma_mid(Z, k, delta));
            }
        }

    // analytic seeding: for each (Z, delta) the admissible k window is
    // (G(Z,delta), (1-Z)/max(ar,1)) intersected with the p ranges; probing
    // its midpoint reaches the thin sliver that survives near alpha_max
    for (double delta : deltas)
        for (int zi = 1; zi < 512; ++zi) {
            const double Z = zi / 512.0;
            if (delta >= Z || 2.0 * Z <= delta) continue;
            const double G = std::max((1.0 - Z) / (2.0 * Z - delta),
                                      Z * (4.0 - Z) / (Z * Z + 4.0 * (1.0 - delta)));
            const double khi =
                std::min({(1.0 - Z) / std::max(ar, 1.0), 1.0, 2.0 / ar - 1.0});
            if (!(khi > G)) continue;
            for (double t : {0.5, 0.25, 0.75}) consider(Z, G + t * (khi - G), delta,
                                                        gamma_mid(Z, G + t * (khi - G), delta));
        }

    // coordinate refinement around the incumbent
    double step = 1.0 / 64.0;
    for (int round = 0; round < 40; ++round) {
        const double Z0 = bZ, k0 = bk, d0 = bd, g0 = bg;
        for (int dz = -2; dz <= 2; ++dz)
            for (int dk = -2; dk <= 2; ++dk)
                for (int dd = -2; dd <= 2; ++dd)
                    for (int dg = -2; dg <= 2; ++dg)
                        consider(Z0 + dz * step, k0 + dk * step,
                                 std::max(1e-9, d0 * std::pow(1.6, dd)), g0 + dg * step);
        step *= 0.6;
    }

    best.p = 1.0 + bk;
    best.s = bZ - 1.0;
    best.delta = bd;
    best.gamma = bg;
    best.r = best.p / ((1.0 - (best.s + 1.0) * best.p / 4.0) * best.gamma + 1.0);
    best.slacks = exponent_slacks(alpha, best.p, best.s, best.delta, best.gamma);
    best.feasible = best.min_slack >= 1e-6;
    if (!best.feasible && binding >= 0) best.violated = kConstraintNames[binding];
    return best;
}

}  // namespace ellsq
