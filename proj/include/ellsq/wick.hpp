#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ellsq/noise.hpp"

namespace ellsq {

// Renormalization constant: the per-site variance of the filtered Gaussian
// field the constant will Wick-order, computed exactly as the dual-lattice
// sum of the squared filter multiplier. The provenance string keys caches so
// constants built for one (operator, grid, mass) are never applied to fields
// built with another.
struct WickConstants {
    double c = 0.0;
    std::string provenance;
};

// variance of I(A xi) = (-Delta+m^2)^(-1) (A xi) at a site
WickConstants wick_constant(const RegularizationOp& A, const Grid& g, double m2);
// variance of an arbitrary multiplier applied to white noise
WickConstants wick_constant_for(const SpectralMultiplier& filter, const std::string& provenance);

// Wick exponential exp(alpha X - alpha^2 c / 2) stored in log space. Sites
// whose log-density exceeds the overflow guard are capped and counted;
// ball masses are accumulated with a streaming max-shift so they never
// overflow even when the density itself would.
class GmcMeasure {
  public:
    GmcMeasure() = default;
    GmcMeasure(RealField log_density, double alpha, double c, std::string provenance);

    const RealField& log_density() const { return log_density_; }
    const Grid& grid() const { return log_density_.grid(); }
    double alpha() const { return alpha_; }
    double wick_c() const { return c_; }
    const std::string& provenance() const { return provenance_; }

    // pointwise density, capped at exp(overflow_guard)
    RealField density() const;
    std::int64_t overflow_count() const { return overflow_count_; }
    bool overflow_flagged() const { return overflow_count_ > 0; }

    static constexpr double overflow_guard = 700.0;

  private:
    RealField log_density_;
    double alpha_ = 0.0;
    double c_ = 0.0;
    std::string provenance_;
    std::int64_t overflow_count_ = 0;
};

GmcMeasure wick_exp(const RealField& X, double alpha, const WickConstants& c);

// Hermite polynomial H_n(X; c) with variance parameter c:
//   H_0 = 1, H_1 = x, H_{n+1} = x H_n - n c H_{n-1}
RealField wick_power(const RealField& X, int n, double c);
double hermite(double x, int n, double c);

// volume-weighted density mass of the periodic ball of radius r at `center`
double ball_mass(const GmcMeasure& mu, const std::vector<int>& center, double r);

// number of lattice sites in a periodic ball of radius r
std::int64_t ball_site_count(const Grid& g, double r);

// Moment-scaling fit: log E[mass(B_r)^p] regressed on log r_eff, where
// r_eff is the radius of the continuum ball with the same lattice volume
// (removes the discreteness wiggle of raw radii; exact p*rank slope for
// constant densities). E_hat averages over samples and, in `all_centers`
// mode, over every ball center within each sample.
struct GmcScalingResult {
    std::vector<double> radii;
    std::vector<double> r_eff;
    std::vector<double> e_hat;
    std::vector<double> e_stderr;
    double p = 0.0;
    double zeta_hat = 0.0;
    double zeta_stderr = 0.0;
    double zeta_theory = 0.0;
    bool span_warning = false;  // radii span less than one decade
};

enum class BallCenterMode { all_centers, origin_only };

double zeta_theory(double alpha, double p, int rank);

GmcScalingResult gmc_moment_scaling(const std::function<GmcMeasure(int)>& sample_factory,
                                    int n_samples, const std::vector<double>& radii, double p,
                                    double alpha, std::uint64_t bootstrap_seed,
                                    BallCenterMode mode = BallCenterMode::all_centers,
                                    int n_bootstrap = 1000);

// CSV with columns (r, p, E_hat, stderr)
void write_scaling_csv(const std::string& path, const GmcScalingResult& r);
// JSON summary with zeta_hat, zeta_theory, stderr
void write_scaling_summary(const std::string& path, const GmcScalingResult& r);

}  // namespace ellsq
