#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "ellsq/model.hpp"
#include "ellsq/noise.hpp"
#include "ellsq/wick.hpp"

namespace ellsq {

struct SolverSettings {
    enum class Method { picard, damped_newton };
    Method method = Method::damped_newton;
    double damping = 1.0;        // initial step; halved on residual increase, floor 1/64
    double tolerance = 1e-10;    // sup-norm residual
    int max_iterations = 100;
    double divergence_guard = 1e8;
    double cg_rel_tolerance = 1e-12;
    int cg_max_iterations = 500;
};

struct Solution {
    std::vector<RealField> fields;  // one per Galerkin mode; single entry otherwise
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    bool sign_check_pass = true;    // exponential model only
    std::vector<std::pair<int, double>> trace;  // (iteration, residual)
};

// The paper's bounded increasing continuation of exp: identical to exp on
// x <= 0; converged exponential-model solutions satisfy alpha phibar <= 0,
// where the two coincide.
double truncated_exp(double x);
double truncated_exp_prime(double x);

// Projected n-mode system over the 2-d x-grid:
//   (-Delta + m^2 + lambda_k) psibar_k + sigma_k^2 f(x) dVn_k(xitilde + psibar) = 0
class GalerkinSystem {
  public:
    using Partial = std::function<double(const std::vector<double>& y, int k)>;
    using Partial2 = std::function<double(const std::vector<double>& y, int k, int l)>;

    // d = 0 route: mode masses and the projected potential supplied directly
    static GalerkinSystem direct(const Grid& x_grid, double m2, std::vector<double> lambdas,
                                 std::vector<double> sigmas, Partial dVn, Partial2 d2Vn,
                                 const RadialCutoff& f);

    // d >= 1 route: V_n(y) = sum_z g(z) V(sum_k y_k H_k(z)) cellvol built by
    // z-quadrature over tabulated eigenfunctions
    static GalerkinSystem quadrature(const Grid& x_grid, double m2, std::vector<double> lambdas,
                                     std::vector<double> sigmas, const Potential& V,
                                     const SupportCutoff& g_cut, const Grid& z_grid,
                                     std::vector<RealField> eigenfunctions,
                                     const RadialCutoff& f);

    int n_modes() const { return static_cast<int>(lambdas_.size()); }
    const Grid& x_grid() const { return x_grid_; }
    double m2() const { return m2_; }
    const std::vector<double>& lambdas() const { return lambdas_; }
    const std::vector<double>& sigmas() const { return sigmas_; }
    const RealField& f_field() const { return f_field_; }

    double dVn(const std::vector<double>& y, int k) const { return dVn_(y, k); }
    double d2Vn(const std::vector<double>& y, int k, int l) const { return d2Vn_(y, k, l); }

  private:
    Grid x_grid_;
    double m2_ = 1.0;
    std::vector<double> lambdas_, sigmas_;
    Partial dVn_;
    Partial2 d2Vn_;
    RealField f_field_;
};

// xitilde_k = sigma_k (-Delta + m^2 + lambda_k)^{-1} xi^k with independent
// white noises per mode
std::vector<RealField> make_xi_tilde(const GalerkinSystem& sys, const SeedRecord& seed);

Solution solve_galerkin(const GalerkinSystem& sys, const std::vector<RealField>& xi_tilde,
                        const SolverSettings& settings,
                        const std::vector<RealField>* initial_guess = nullptr);

// residual recomputed from scratch (fresh operators), sup-norm over modes
double galerkin_residual(const GalerkinSystem& sys, const std::vector<RealField>& xi_tilde,
                         const std::vector<RealField>& psibar);

// (-Delta + m^2) phibar + alpha g G(alpha phibar) eta = 0
Solution solve_exponential(const GmcMeasure& eta, const RealField& g_weight, double alpha,
                           double m2, const SolverSettings& settings,
                           const RealField* initial_guess = nullptr);
double exponential_residual(const GmcMeasure& eta, const RealField& g_weight, double alpha,
                            double m2, const RealField& phibar);

// (-Delta + m^2) thetabar + f sum_k C(2n-1,k) sigma_k thetabar^{2n-1-k} = 0,
// sigma_fields[k] = (I xi)^{wick k} for k = 0..2n-1 (sigma_0 = 1)
Solution solve_polynomial(const std::vector<RealField>& sigma_fields, const RealField& f_field,
                          double m2, const SolverSettings& settings,
                          const RealField* initial_guess = nullptr);
double polynomial_residual(const std::vector<RealField>& sigma_fields, const RealField& f_field,
                           double m2, const RealField& thetabar);

// discrete pairing <thetabar, residual operator> used by the energy identity
double polynomial_energy_pairing(const std::vector<RealField>& sigma_fields,
                                 const RealField& f_field, double m2, const RealField& thetabar,
                                 double* linear_part = nullptr, double* nonlinear_part = nullptr);

// sup-norm discrepancy between solves started from zero and from a seeded
// random field of the given amplitude
double uniqueness_probe(const std::function<Solution(const RealField*)>& solve, const Grid& grid,
                        std::uint64_t seed, double amplitude = 1.0);

}  // namespace ellsq
