#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellsq/multiplier.hpp"
#include "ellsq/rng.hpp"

namespace ellsq {

struct SeedRecord {
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;
};

// White-noise realization: i.i.d. N(0, 1/cellvol) per site, so that smeared
// pairings <xi, h> = sum_x xi(x) h(x) cellvol have variance ||h||_2^2 cellvol
// -> L^2 in the continuum limit. Reproducible from its seed record.
struct NoiseSample {
    RealField field;
    SeedRecord seed;
};

// purpose_tag separates independent noise families sharing one seed record
// (e.g. the per-mode noises of a projected system)
NoiseSample sample_white_noise(const Grid& g, const SeedRecord& seed,
                               std::uint32_t purpose_tag = 0x57A7u);

// Regularization operator: either a spectral eigenvalue sequence sigma(k)
// acting on the z-axes (the discrete-spectrum hypothesis) or a smoothing
// mollifier profile acting on all axes. Multipliers must be positive on all
// retained modes (injectivity).
class RegularizationOp {
  public:
    enum class Kind { identity, spectral, mollifier };
    enum class MollifierProfile { gaussian, raised_cosine };

    static RegularizationOp identity();
    // sigma as a function of the z-frequency-squared |k_z|^2
    static RegularizationOp spectral(std::function<double(double k2z)> sigma);
    // ahat(eps k) over all axes; gaussian: exp(-(eps|k|)^2); raised_cosine:
    // cos^2 ramp vanishing at |k| = pi/eps (compact Fourier support)
    static RegularizationOp mollifier(double eps, MollifierProfile profile);

    Kind kind() const { return kind_; }
    double eps() const { return eps_; }

    // multiplier value at split frequencies (k2 total, k2z z-part)
    double multiplier(double k2, double k2z) const;
    // tabulate on a grid; throws if any retained mode multiplier is <= 0
    // (mollifier kinds with compact support are allowed to vanish at the
    // lattice edge only when `allow_zero_tail`)
    SpectralMultiplier tabulate(const Grid& g, bool allow_zero_tail = true) const;

    // effective physical support radius for diagnostics
    double support_radius() const;

    std::string describe() const;

  private:
    Kind kind_ = Kind::identity;
    std::function<double(double)> sigma_;
    double eps_ = 0.0;
    MollifierProfile profile_ = MollifierProfile::gaussian;
};

RealField regularize(const NoiseSample& xi, const RegularizationOp& op);

// Per-mode audit of the regularized covariance against the exact Gaussian
// law: empirical per-mode variances over n_samples vs sigma(k)^2 times the
// white level, flagged beyond `flag_sigmas` standard errors.
struct CovarianceAudit {
    std::size_t modes_checked = 0;
    std::size_t modes_flagged = 0;
    double worst_z = 0.0;
    double worst_k2 = 0.0;
    bool pass = false;
};

CovarianceAudit covariance_audit(const Grid& g, const RegularizationOp& op,
                                 int n_samples, std::uint64_t master_seed,
                                 double flag_sigmas = 5.0);

}  // namespace ellsq
