#include "ellsq/solver.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace ellsq {

double truncated_exp(double x) { return x <= 0.0 ? std::exp(x) : 2.0 - std::exp(-x); }
double truncated_exp_prime(double x) { return x <= 0.0 ? std::exp(x) : std::exp(-x); }

namespace {

constexpr std::uint32_t kModeNoiseTag = 0xA110u;
constexpr std::uint32_t kGuessTag = 0x6E55u;
constexpr double kDampingFloor = 1.0 / 64.0;

double binom(int n, int k) {
    double acc = 1.0;
    for (int i = 0; i < k; ++i) acc = acc * (n - i) / (i + 1);
    return acc;
}

using FieldVec = std::vector<RealField>;

double vec_dot(const FieldVec& a, const FieldVec& b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += field_dot(a[k], b[k]);
    return acc;
}

void vec_axpy(double c, const FieldVec& x, FieldVec& y) {
    for (std::size_t k = 0; k < x.size(); ++k) axpy(c, x[k], y[k]);
}

double vec_sup(const FieldVec& a) {
    double m = 0.0;
    for (const auto& f : a) m = std::max(m, sup_abs(f));
    return m;
}

// Preconditioned CG over a stack of mode fields. Returns false on a
// non-positive-curvature breakdown; the partial iterate is still usable as a
// descent direction for the damped outer loop.
bool pcg(const std::function<void(const FieldVec&, FieldVec&)>& apply_op,
         const std::function<void(const FieldVec&, FieldVec&)>& apply_prec,
         const FieldVec& rhs, FieldVec& x, double rel_tol, int max_iter) {
    const Grid& g = rhs[0].grid();
    const std::size_t n = rhs.size();
    FieldVec r = rhs, z(n, RealField(g)), p(n, RealField(g)), Ap(n, RealField(g));
    for (auto& f : x) scale(0.0, f);
    const double bnorm = std::sqrt(vec_dot(rhs, rhs));
    if (bnorm == 0.0) return true;
    apply_prec(r, z);
    p = z;
    double rz = vec_dot(r, z);
    for (int it = 0; it < max_iter; ++it) {
        apply_op(p, Ap);
        const double pAp = vec_dot(p, Ap);
        if (!(pAp > 0.0)) return false;
        const double alpha = rz / pAp;
        vec_axpy(alpha, p, x);
        vec_axpy(-alpha, Ap, r);
        if (std::sqrt(vec_dot(r, r)) <= rel_tol * bnorm) return true;
        apply_prec(r, z);
        const double rz_new = vec_dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < n; ++k) {
            scale(beta, p[k]);
            axpy(1.0, z[k], p[k]);
        }
    }
    return true;
}

// Damped-Newton driver shared by the three model families.
struct NewtonProblem {
    std::function<void(const FieldVec&, FieldVec&)> residual;
    std::function<void(const FieldVec&)> prepare_jacobian;
    std::function<void(const FieldVec&, FieldVec&)> jacobian_apply;
    std::function<void(const FieldVec&, FieldVec&)> preconditioner;
    std::function<void(const FieldVec&, FieldVec&)> picard_map;
};

Solution run_solver(const NewtonProblem& prob, FieldVec start, const SolverSettings& st) {
    Solution sol;
    const Grid& g = start[0].grid();
    const std::size_t n = start.size();
    FieldVec x = std::move(start);
    FieldVec R(n, RealField(g)), delta(n, RealField(g)), trial(n, RealField(g)),
        Rtrial(n, RealField(g));

    prob.residual(x, R);
    double res = vec_sup(R);
    sol.trace.emplace_back(0, res);

    double damping = std::min(1.0, st.damping);
    for (int iter = 1; iter <= st.max_iterations && res > st.tolerance; ++iter) {
        if (!(res < st.divergence_guard) || !(vec_sup(x) < st.divergence_guard)) {
            sol.iterations = iter - 1;
            break;
        }

        if (st.method == SolverSettings::Method::damped_newton) {
            prob.prepare_jacobian(x);
            FieldVec rhs = R;
            for (auto& f : rhs) scale(-1.0, f);
            pcg(prob.jacobian_apply, prob.preconditioner, rhs, delta, st.cg_rel_tolerance,
                st.cg_max_iterations);
        } else {
            prob.picard_map(x, trial);
            for (std::size_t k = 0; k < n; ++k) {
                delta[k] = trial[k];
                axpy(-1.0, x[k], delta[k]);
            }
        }

        // backtracking: halve on residual increase, floor 1/64
        double tau = damping;
        bool accepted = false;
        while (true) {
            for (std::size_t k = 0; k < n; ++k) {
                trial[k] = x[k];
                axpy(tau, delta[k], trial[k]);
            }
            prob.residual(trial, Rtrial);
            const double res_trial = vec_sup(Rtrial);
            if (res_trial < res) {
                x = trial;
                R = Rtrial;
                res = res_trial;
                accepted = true;
                break;
            }
            if (tau <= kDampingFloor) break;
            tau = std::max(kDampingFloor, 0.5 * tau);
        }
        sol.iterations = iter;
        sol.trace.emplace_back(iter, res);
        if (!accepted) break;  // stalled; report honestly
        damping = std::min(1.0, tau * 2.0);
    }

    sol.fields = std::move(x);
    sol.residual = res;
    sol.converged = res <= st.tolerance;
    return sol;
}

}  // namespace

// --- Galerkin ----------------------------------------------------------------

GalerkinSystem GalerkinSystem::direct(const Grid& x_grid, double m2, std::vector<double> lambdas,
                                      std::vector<double> sigmas, Partial dVn, Partial2 d2Vn,
                                      const RadialCutoff& f) {
    if (x_grid.rank() != 2 || x_grid.n_x_axes() != 2)
        throw std::invalid_argument("galerkin: system lives on the 2-d x-grid");
    if (lambdas.size() != sigmas.size() || lambdas.empty())
        throw std::invalid_argument("galerkin: lambda/sigma lists mismatch");
    for (double l : lambdas)
        if (l < 0.0) throw std::invalid_argument("galerkin: eigenvalues must be >= 0");
    for (double s : sigmas)
        if (!(s > 0.0)) throw std::invalid_argument("galerkin: sigmas must be positive");
    GalerkinSystem sys;
    sys.x_grid_ = x_grid;
    sys.m2_ = m2;
    sys.lambdas_ = std::move(lambdas);
    sys.sigmas_ = std::move(sigmas);
    sys.dVn_ = std::move(dVn);
    sys.d2Vn_ = std::move(d2Vn);
    sys.f_field_ = eval_f(f, x_grid);
    return sys;
}

GalerkinSystem GalerkinSystem::quadrature(const Grid& x_grid, double m2,
                                          std::vector<double> lambdas, std::vector<double> sigmas,
                                          const Potential& V, const SupportCutoff& g_cut,
                                          const Grid& z_grid,
                                          std::vector<RealField> eigenfunctions,
                                          const RadialCutoff& f) {
    if (eigenfunctions.size() != lambdas.size())
        throw std::invalid_argument("galerkin: one eigenfunction per mode required");
    const double cellvol = z_grid.rank() > 0 ? z_grid.cell_volume() : 1.0;
    auto H = std::make_shared<std::vector<RealField>>(std::move(eigenfunctions));
    auto gz = std::make_shared<RealField>(eval_g(g_cut, z_grid));
    auto dV = V.dV;
    auto d2V = V.d2V;

    Partial dVn = [H, gz, dV, cellvol](const std::vector<double>& y, int k) {
        double acc = 0.0;
        const std::size_t nz = gz->size();
        for (std::size_t z = 0; z < nz; ++z) {
            double phi = 0.0;
            for (std::size_t j = 0; j < y.size(); ++j) phi += y[j] * (*H)[j][z];
            acc += (*gz)[z] * dV(phi) * (*H)[k][z];
        }
        return acc * cellvol;
    };
    Partial2 d2Vn = [H, gz, d2V, cellvol](const std::vector<double>& y, int k, int l) {
        double acc = 0.0;
        const std::size_t nz = gz->size();
        for (std::size_t z = 0; z < nz; ++z) {
            double phi = 0.0;
            for (std::size_t j = 0; j < y.size(); ++j) phi += y[j] * (*H)[j][z];
            acc += (*gz)[z] * d2V(phi) * (*H)[k][z] * (*H)[l][z];
        }
        return acc * cellvol;
    };
    return direct(x_grid, m2, std::move(lambdas), std::move(sigmas), std::move(dVn),
                  std::move(d2Vn), f);
}

std::vector<RealField> make_xi_tilde(const GalerkinSystem& sys, const SeedRecord& seed) {
    std::vector<RealField> out;
    out.reserve(sys.n_modes());
    for (int k = 0; k < sys.n_modes(); ++k) {
        NoiseSample xi = sample_white_noise(sys.x_grid(), {seed.master_seed, seed.sample_index},
                                            kModeNoiseTag + static_cast<std::uint32_t>(k));
        SpectralMultiplier green = green_multiplier(sys.x_grid(), sys.m2() + sys.lambdas()[k], 1);
        RealField field = green.convolve(xi.field);
        scale(sys.sigmas()[k], field);
        out.push_back(std::move(field));
    }
    return out;
}

namespace {

// Work space for the Galerkin solver. The iteration runs in the symmetrized
// variables psi_k = psibar_k / sigma_k, where the Jacobian
// (-Delta+m^2+lambda_k) delta_kl + f sigma_k sigma_l d2V_kl is symmetric and,
// for convex potentials, positive definite.
struct GalerkinWork {
    const GalerkinSystem* sys;
    const FieldVec* xi_tilde;
    std::vector<SpectralMultiplier> forward, inverse;
    std::vector<RealField> coupling;  // f sigma_k sigma_l d2V_kl tables
    int n = 0;

    GalerkinWork(const GalerkinSystem& s, const FieldVec& xt)
        : sys(&s), xi_tilde(&xt), n(s.n_modes()) {
        for (int k = 0; k < n; ++k) {
            forward.push_back(inverse_green_multiplier(s.x_grid(), s.m2() + s.lambdas()[k], 1));
            inverse.push_back(green_multiplier(s.x_grid(), s.m2() + s.lambdas()[k], 1));
        }
        coupling.assign(static_cast<std::size_t>(n) * n, RealField(s.x_grid()));
    }

    void residual(const FieldVec& psi, FieldVec& R) const {
        const std::size_t nsites = psi[0].size();
        const RealField& f = sys->f_field();
        for (int k = 0; k < n; ++k) R[k] = forward[k].convolve(psi[k]);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < nsites; ++i) {
            for (int k = 0; k < n; ++k)
                y[k] = (*xi_tilde)[k][i] + sys->sigmas()[k] * psi[k][i];
            for (int k = 0; k < n; ++k) R[k][i] += sys->sigmas()[k] * f[i] * sys->dVn(y, k);
        }
    }

    void prepare(const FieldVec& psi) {
        const std::size_t nsites = psi[0].size();
        const RealField& f = sys->f_field();
        std::vector<double> y(n);
        for (std::size_t i = 0; i < nsites; ++i) {
            for (int k = 0; k < n; ++k)
                y[k] = (*xi_tilde)[k][i] + sys->sigmas()[k] * psi[k][i];
            for (int k = 0; k < n; ++k)
                for (int l = k; l < n; ++l) {
                    const double w =
                        f[i] * sys->sigmas()[k] * sys->sigmas()[l] * sys->d2Vn(y, k, l);
                    coupling[k * n + l][i] = w;
                    if (l != k) coupling[l * n + k][i] = w;
                }
        }
    }

    void jacobian(const FieldVec& v, FieldVec& out) const {
        for (int k = 0; k < n; ++k) {
            out[k] = forward[k].convolve(v[k]);
            for (int l = 0; l < n; ++l) {
                const RealField& w = coupling[k * n + l];
                for (std::size_t i = 0; i < out[k].size(); ++i) out[k][i] += w[i] * v[l][i];
            }
        }
    }

    void precondition(const FieldVec& r, FieldVec& z) const {
        for (int k = 0; k < n; ++k) z[k] = inverse[k].convolve(r[k]);
    }

    void picard(const FieldVec& psi, FieldVec& next) const {
        const std::size_t nsites = psi[0].size();
        const RealField& f = sys->f_field();
        std::vector<double> y(n);
        FieldVec rhs(n, RealField(sys->x_grid()));
        for (std::size_t i = 0; i < nsites; ++i) {
            for (int k = 0; k < n; ++k)
                y[k] = (*xi_tilde)[k][i] + sys->sigmas()[k] * psi[k][i];
            for (int k = 0; k < n; ++k) rhs[k][i] = -sys->sigmas()[k] * f[i] * sys->dVn(y, k);
        }
        for (int k = 0; k < n; ++k) next[k] = inverse[k].convolve(rhs[k]);
    }
};

}  // namespace

Solution solve_galerkin(const GalerkinSystem& sys, const std::vector<RealField>& xi_tilde,
                        const SolverSettings& settings,
                        const std::vector<RealField>* initial_guess) {
    if (static_cast<int>(xi_tilde.size()) != sys.n_modes())
        throw std::invalid_argument("solve_galerkin: xi_tilde size mismatch");
    auto work = std::make_shared<GalerkinWork>(sys, xi_tilde);

    NewtonProblem prob;
    prob.residual = [work](const FieldVec& x, FieldVec& R) { work->residual(x, R); };
    prob.prepare_jacobian = [work](const FieldVec& x) { work->prepare(x); };
    prob.jacobian_apply = [work](const FieldVec& v, FieldVec& o) { work->jacobian(v, o); };
    prob.preconditioner = [work](const FieldVec& r, FieldVec& z) { work->precondition(r, z); };
    prob.picard_map = [work](const FieldVec& x, FieldVec& n) { work->picard(x, n); };

    FieldVec start(sys.n_modes(), RealField(sys.x_grid()));
    if (initial_guess) {
        for (int k = 0; k < sys.n_modes(); ++k) {
            start[k] = (*initial_guess)[k];
            scale(1.0 / sys.sigmas()[k], start[k]);
        }
    }
    Solution sol = run_solver(prob, std::move(start), settings);

    // back to the physical psibar_k = sigma_k psi_k; the reported residual is
    // the unsymmetrized one
    double res = 0.0;
    {
        FieldVec R(sys.n_modes(), RealField(sys.x_grid()));
        work->residual(sol.fields, R);
        for (int k = 0; k < sys.n_modes(); ++k)
            res = std::max(res, sys.sigmas()[k] * sup_abs(R[k]));
    }
    for (int k = 0; k < sys.n_modes(); ++k) scale(sys.sigmas()[k], sol.fields[k]);
    sol.residual = res;
    sol.converged = res <= settings.tolerance;
    return sol;
}

double galerkin_residual(const GalerkinSystem& sys, const std::vector<RealField>& xi_tilde,
                         const std::vector<RealField>& psibar) {
    double worst = 0.0;
    const std::size_t nsites = psibar[0].size();
    const int n = sys.n_modes();
    std::vector<double> y(n);
    std::vector<RealField> lin(n);
    for (int k = 0; k < n; ++k)
        lin[k] = inverse_green_multiplier(sys.x_grid(), sys.m2() + sys.lambdas()[k], 1)
                     .convolve(psibar[k]);
    for (std::size_t i = 0; i < nsites; ++i) {
        for (int k = 0; k < n; ++k) y[k] = xi_tilde[k][i] + psibar[k][i];
        for (int k = 0; k < n; ++k) {
            const double r = lin[k][i] + sys.sigmas()[k] * sys.sigmas()[k] * sys.f_field()[i] *
                                             sys.dVn(y, k);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

// --- exponential ---------------------------------------------------------------

namespace {

struct ExponentialWork {
    const RealField* g_weight;
    RealField eta_density;
    double alpha, m2;
    SpectralMultiplier forward, inverse;
    RealField diag;  // alpha^2 g G'(alpha phi) eta

    ExponentialWork(const GmcMeasure& eta, const RealField& gw, double a, double m2_)
        : g_weight(&gw), eta_density(eta.density()), alpha(a), m2(m2_),
          forward(inverse_green_multiplier(eta.grid(), m2_, 1)),
          inverse(green_multiplier(eta.grid(), m2_, 1)) {}

    void residual(const FieldVec& x, FieldVec& R) const {
        const RealField& phi = x[0];
        R[0] = forward.convolve(phi);
        for (std::size_t i = 0; i < phi.size(); ++i)
            R[0][i] += alpha * (*g_weight)[i] * truncated_exp(alpha * phi[i]) * eta_density[i];
    }

    void prepare(const FieldVec& x) {
        const RealField& phi = x[0];
        diag = RealField(phi.grid());
        for (std::size_t i = 0; i < phi.size(); ++i)
            diag[i] = alpha * alpha * (*g_weight)[i] * truncated_exp_prime(alpha * phi[i]) *
                      eta_density[i];
    }

    void jacobian(const FieldVec& v, FieldVec& out) const {
        out[0] = forward.convolve(v[0]);
        for (std::size_t i = 0; i < out[0].size(); ++i) out[0][i] += diag[i] * v[0][i];
    }

    void precondition(const FieldVec& r, FieldVec& z) const { z[0] = inverse.convolve(r[0]); }

    void picard(const FieldVec& x, FieldVec& next) const {
        const RealField& phi = x[0];
        RealField rhs(phi.grid());
        for (std::size_t i = 0; i < phi.size(); ++i)
            rhs[i] = -alpha * (*g_weight)[i] * truncated_exp(alpha * phi[i]) * eta_density[i];
        next[0] = inverse.convolve(rhs);
    }
};

}  // namespace

Solution solve_exponential(const GmcMeasure& eta, const RealField& g_weight, double alpha,
                           double m2, const SolverSettings& settings,
                           const RealField* initial_guess) {
    if (g_weight.grid() != eta.grid())
        throw std::invalid_argument("solve_exponential: grid mismatch");
    auto work = std::make_shared<ExponentialWork>(eta, g_weight, alpha, m2);

    NewtonProblem prob;
    prob.residual = [work](const FieldVec& x, FieldVec& R) { work->residual(x, R); };
    prob.prepare_jacobian = [work](const FieldVec& x) { work->prepare(x); };
    prob.jacobian_apply = [work](const FieldVec& v, FieldVec& o) { work->jacobian(v, o); };
    prob.preconditioner = [work](const FieldVec& r, FieldVec& z) { work->precondition(r, z); };
    prob.picard_map = [work](const FieldVec& x, FieldVec& n) { work->picard(x, n); };

    FieldVec start{initial_guess ? *initial_guess : RealField(eta.grid())};
    Solution sol = run_solver(prob, std::move(start), settings);

    // maximum-principle certificate: alpha phibar <= 0 up to tolerance
    const RealField& phi = sol.fields[0];
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) worst = std::max(worst, alpha * phi[i]);
    sol.sign_check_pass = worst <= 1e-8;
    return sol;
}

double exponential_residual(const GmcMeasure& eta, const RealField& g_weight, double alpha,
                            double m2, const RealField& phibar) {
    RealField lin = inverse_green_multiplier(eta.grid(), m2, 1).convolve(phibar);
    const RealField dens = eta.density();
    double worst = 0.0;
    for (std::size_t i = 0; i < phibar.size(); ++i) {
        const double r = lin[i] + alpha * g_weight[i] * truncated_exp(alpha * phibar[i]) * dens[i];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

// --- polynomial ------------------------------------------------------------------

namespace {

struct PolynomialWork {
    const std::vector<RealField>* sigma;
    const RealField* f;
    double m2;
    int two_n;
    SpectralMultiplier forward, inverse;
    RealField diag;

    PolynomialWork(const std::vector<RealField>& s, const RealField& f_, double m2_)
        : sigma(&s), f(&f_), m2(m2_), two_n(static_cast<int>(s.size())),
          forward(inverse_green_multiplier(f_.grid(), m2_, 1)),
          inverse(green_multiplier(f_.grid(), m2_, 1)) {}

    double nonlin_at(std::size_t i, double theta) const {
        double acc = 0.0, pw = 1.0;
        for (int k = two_n - 1; k >= 0; --k) {
            acc += binom(two_n - 1, k) * (*sigma)[k][i] * pw;
            pw *= theta;
        }
        return (*f)[i] * acc;
    }

    double nonlin_prime_at(std::size_t i, double theta) const {
        double acc = 0.0, pw = 1.0;
        for (int k = two_n - 2; k >= 0; --k) {
            acc += binom(two_n - 1, k) * (two_n - 1 - k) * (*sigma)[k][i] * pw;
            pw *= theta;
        }
        return (*f)[i] * acc;
    }

    void residual(const FieldVec& x, FieldVec& R) const {
        const RealField& th = x[0];
        R[0] = forward.convolve(th);
        for (std::size_t i = 0; i < th.size(); ++i) R[0][i] += nonlin_at(i, th[i]);
    }

    void prepare(const FieldVec& x) {
        const RealField& th = x[0];
        diag = RealField(th.grid());
        for (std::size_t i = 0; i < th.size(); ++i) diag[i] = nonlin_prime_at(i, th[i]);
    }

    void jacobian(const FieldVec& v, FieldVec& out) const {
        out[0] = forward.convolve(v[0]);
        for (std::size_t i = 0; i < out[0].size(); ++i) out[0][i] += diag[i] * v[0][i];
    }

    void precondition(const FieldVec& r, FieldVec& z) const { z[0] = inverse.convolve(r[0]); }

    void picard(const FieldVec& x, FieldVec& next) const {
        const RealField& th = x[0];
        RealField rhs(th.grid());
        for (std::size_t i = 0; i < th.size(); ++i) rhs[i] = -nonlin_at(i, th[i]);
        next[0] = inverse.convolve(rhs);
    }
};

}  // namespace

Solution solve_polynomial(const std::vector<RealField>& sigma_fields, const RealField& f_field,
                          double m2, const SolverSettings& settings,
                          const RealField* initial_guess) {
    if (sigma_fields.size() < 2 || sigma_fields.size() % 2 != 0)
        throw std::invalid_argument(
            "solve_polynomial: need sigma_0..sigma_{2n-1} (even count >= 2)");
    auto work = std::make_shared<PolynomialWork>(sigma_fields, f_field, m2);

    NewtonProblem prob;
    prob.residual = [work](const FieldVec& x, FieldVec& R) { work->residual(x, R); };
    prob.prepare_jacobian = [work](const FieldVec& x) { work->prepare(x); };
    prob.jacobian_apply = [work](const FieldVec& v, FieldVec& o) { work->jacobian(v, o); };
    prob.preconditioner = [work](const FieldVec& r, FieldVec& z) { work->precondition(r, z); };
    prob.picard_map = [work](const FieldVec& x, FieldVec& n) { work->picard(x, n); };

    FieldVec start{initial_guess ? *initial_guess : RealField(f_field.grid())};
    return run_solver(prob, std::move(start), settings);
}

double polynomial_residual(const std::vector<RealField>& sigma_fields, const RealField& f_field,
                           double m2, const RealField& thetabar) {
    RealField lin = inverse_green_multiplier(f_field.grid(), m2, 1).convolve(thetabar);
    const int two_n = static_cast<int>(sigma_fields.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < thetabar.size(); ++i) {
        double acc = 0.0, pw = 1.0;
        for (int k = two_n - 1; k >= 0; --k) {
            acc += binom(two_n - 1, k) * sigma_fields[k][i] * pw;
            pw *= thetabar[i];
        }
        worst = std::max(worst, std::abs(lin[i] + f_field[i] * acc));
    }
    return worst;
}

double polynomial_energy_pairing(const std::vector<RealField>& sigma_fields,
                                 const RealField& f_field, double m2, const RealField& thetabar,
                                 double* linear_part, double* nonlinear_part) {
    const Grid& g = thetabar.grid();
    SpectralField th = fft_forward(thetabar);
    double lin = 0.0;
    spectral_for_each(g, [&](std::size_t i, double k2, double w) {
        lin += w * (k2 + m2) * std::norm(th[i]);
    });
    lin *= g.cell_volume() / static_cast<double>(g.n_sites());

    const int two_n = static_cast<int>(sigma_fields.size());
    double nl = 0.0;
    for (std::size_t i = 0; i < thetabar.size(); ++i) {
        double acc = 0.0, pw = 1.0;
        for (int k = two_n - 1; k >= 0; --k) {
            acc += binom(two_n - 1, k) * sigma_fields[k][i] * pw;
            pw *= thetabar[i];
        }
        nl += thetabar[i] * f_field[i] * acc;
    }
    nl *= g.cell_volume();
    if (linear_part) *linear_part = lin;
    if (nonlinear_part) *nonlinear_part = nl;
    return lin + nl;
}

double uniqueness_probe(const std::function<Solution(const RealField*)>& solve, const Grid& grid,
                        std::uint64_t seed, double amplitude) {
    Solution from_zero = solve(nullptr);
    Philox rng(seed, stream_id(0, kGuessTag));
    RealField guess(grid);
    for (std::size_t i = 0; i < guess.size(); ++i) guess[i] = amplitude * rng.next_normal();
    Solution from_random = solve(&guess);
    if (!from_zero.converged || !from_random.converged)
        throw std::runtime_error("uniqueness_probe: a solve failed to converge");
    double disc = 0.0;
    for (std::size_t k = 0; k < from_zero.fields.size(); ++k)
        for (std::size_t i = 0; i < from_zero.fields[k].size(); ++i)
            disc = std::max(disc, std::abs(from_zero.fields[k][i] - from_random.fields[k][i]));
    return disc;
}

}  // namespace ellsq
