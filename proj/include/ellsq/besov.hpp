#pragma once

#include <cstdint>
#include <vector>

#include "ellsq/multiplier.hpp"
#include "ellsq/noise.hpp"
#include "ellsq/wick.hpp"

namespace ellsq {

// Littlewood-Paley partition on the dual lattice. The base window chi is a
// raised-cosine radial profile equal to 1 on B_{3/4} and supported in
// B_{4/3}; phi(k) = chi(k/2) - chi(k) is supported in the annulus
// B_{8/3} \ B_{3/4}. Blocks are phi_{-1} = chi and phi_j = phi(2^{-j} .) for
// 0 <= j <= J, with J the smallest index for which the telescoping sum
// chi(k / 2^{J+1}) equals 1 on every lattice mode, so the partition of unity
// closes exactly and reconstruction is lossless.
class DyadicPartition {
  public:
    explicit DyadicPartition(const Grid& g);

    const Grid& grid() const { return grid_; }
    int top_block() const { return top_; }       // J
    int n_blocks() const { return top_ + 2; }    // j = -1 .. J

    // Delta_j u; throws for j outside [-1, J]
    RealField block(const RealField& u, int j) const;
    const SpectralMultiplier& window(int j) const;

    // sup over lattice modes of |1 - sum_j w_j(k)|
    double partition_defect() const;

    static double chi_profile(double r);  // the radial base window

  private:
    Grid grid_;
    int top_ = 0;
    std::vector<SpectralMultiplier> windows_;
};

struct BesovParams {
    double s = 0.0;
    double p = 2.0;
    double q = 2.0;   // may be infinity
    double ell = 3.0; // weight exponent of (1+|zhat|^2)^(-ell/2)
};

// weighted L^p norm with the polynomial weight centered at the torus origin
double weighted_lp_norm(const RealField& u, double p, double ell);

// (sum_j 2^{s j q} ||Delta_j u||_{p,ell}^q)^{1/q}
double besov_norm(const DyadicPartition& part, const RealField& u, const BesovParams& params);

// --- regularity / convergence study for the Wick exponential --------------

struct GmcRegularityRow {
    double eps = 0.0;
    double s = 0.0;
    double p = 0.0;
    double norm_mean = 0.0;   // E[||eta_eps||^p]
    double norm_err = 0.0;
    double cauchy_gap = 0.0;  // E[||eta_eps - eta_{eps/2}||^p], 0 for the last rung
    double cauchy_err = 0.0;
};

struct GmcRegularityStudy {
    std::vector<GmcRegularityRow> rows;  // ladder-major, params-minor
};

// For each sample the same white noise drives every rung of the eps ladder,
// so the Cauchy differences are the coupled ones the convergence statement
// is about.
GmcRegularityStudy gmc_regularity_study(const Grid& g, double m2, double alpha,
                                        const std::vector<double>& eps_ladder,
                                        const std::vector<BesovParams>& params, int n_samples,
                                        std::uint64_t master_seed);

void write_regularity_csv(const std::string& path, const GmcRegularityStudy& study);

}  // namespace ellsq
