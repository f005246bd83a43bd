#include "ellsq/noise.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ellsq {
namespace {

inline double uniform_from(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

NoiseSample sample_white_noise(const Grid& g, const SeedRecord& seed, std::uint32_t purpose_tag) {
    NoiseSample out{RealField(g), seed};
    const Philox eng(seed.master_seed, stream_id(seed.sample_index, purpose_tag));
    const double sd = 1.0 / std::sqrt(g.cell_volume());
    const std::size_t n = out.field.size();
    double* v = out.field.data();
    // one Philox block yields a Box-Muller pair; sites are block-addressed so
    // the result is independent of evaluation order
    const std::size_t nblocks = (n + 1) / 2;
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::uint32_t w[4];
        eng.block(b, w);
        const double u1 = uniform_from(w[0], w[1]);
        const double u2 = uniform_from(w[2], w[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        v[2 * b] = sd * r * std::cos(th);
        if (2 * b + 1 < n) v[2 * b + 1] = sd * r * std::sin(th);
    }
    return out;
}

RegularizationOp RegularizationOp::identity() { return RegularizationOp(); }

RegularizationOp RegularizationOp::spectral(std::function<double(double)> sigma) {
    RegularizationOp op;
    op.kind_ = Kind::spectral;
    op.sigma_ = std::move(sigma);
    return op;
}

RegularizationOp RegularizationOp::mollifier(double eps, MollifierProfile profile) {
    if (!(eps > 0.0)) throw std::invalid_argument("mollifier: eps must be positive");
    RegularizationOp op;
    op.kind_ = Kind::mollifier;
    op.eps_ = eps;
    op.profile_ = profile;
    return op;
}

double RegularizationOp::multiplier(double k2, double k2z) const {
    switch (kind_) {
        case Kind::identity:
            return 1.0;
        case Kind::spectral:
            return sigma_(k2z);
        case Kind::mollifier: {
            const double t = eps_ * std::sqrt(k2);
            if (profile_ == MollifierProfile::gaussian) return std::exp(-t * t);
            if (t >= std::numbers::pi) return 0.0;
            const double c = std::cos(0.5 * t);
            return c * c;
        }
    }
    return 1.0;
}

SpectralMultiplier RegularizationOp::tabulate(const Grid& g, bool allow_zero_tail) const {
    AlignedVector<double> vals(SpectralField::spectral_size(g), 0.0);
    bool has_zero = false;
    spectral_for_each_split(g, [&](std::size_t i, double k2x, double k2z, double) {
        const double m = multiplier(k2x + k2z, k2z);
        if (m <= 0.0) has_zero = true;
        vals[i] = m;
    });
    if (has_zero && !allow_zero_tail)
        throw std::invalid_argument(
            "regularization operator vanishes on retained modes (injectivity violated); "
            "increase the grid resolution or the mollifier bandwidth");
    return SpectralMultiplier(g, std::move(vals));
}

double RegularizationOp::support_radius() const {
    switch (kind_) {
        case Kind::identity:
            return 0.0;
        case Kind::spectral:
            return 0.0;
        case Kind::mollifier:
            return 2.0 * eps_;
    }
    return 0.0;
}

std::string RegularizationOp::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::identity:
            os << "identity";
            break;
        case Kind::spectral:
            os << "spectral";
            break;
        case Kind::mollifier:
            os << (profile_ == MollifierProfile::gaussian ? "mollifier-gaussian"
                                                          : "mollifier-raised-cosine")
               << " eps=" << eps_;
            break;
    }
    return os.str();
}

RealField regularize(const NoiseSample& xi, const RegularizationOp& op) {
    if (op.kind() == RegularizationOp::Kind::identity) return xi.field;
    return op.tabulate(xi.field.grid(), /*allow_zero_tail=*/false).convolve(xi.field);
}

CovarianceAudit covariance_audit(const Grid& g, const RegularizationOp& op,
                                 int n_samples, std::uint64_t master_seed,
                                 double flag_sigmas) {
    if (n_samples < 8) throw std::invalid_argument("covariance_audit: too few samples");
    const SpectralMultiplier mult = op.tabulate(g);
    const std::size_t nspec = SpectralField::spectral_size(g);
    std::vector<double> sum_sq(nspec, 0.0);
    for (int s = 0; s < n_samples; ++s) {
        NoiseSample xi = sample_white_noise(g, {master_seed, static_cast<std::uint64_t>(s)});
        SpectralField sf = fft_forward(xi.field);
        mult.apply(sf);
        for (std::size_t i = 0; i < nspec; ++i) sum_sq[i] += std::norm(sf[i]);
    }
    const double white_level = g.n_sites() / g.cell_volume();

    // self-conjugate modes are real (chi^2_1 per sample), the rest complex
    // (chi^2_2); standard errors differ by sqrt(2)
    CovarianceAudit audit;
    const double* mv = mult.values();
    spectral_for_each_split(g, [&](std::size_t i, double k2x, double k2z, double w) {
        const double exact = mv[i] * mv[i] * white_level;
        const double emp = sum_sq[i] / n_samples;
        const bool self_conj = (w == 1.0) && is_self_conjugate_mode(g, i);
        const double se = exact * (self_conj ? std::sqrt(2.0 / n_samples)
                                             : std::sqrt(1.0 / n_samples));
        double z = 0.0;
        if (exact > 0.0) z = (emp - exact) / se;
        else z = emp > 0.0 ? 1e9 : 0.0;
        ++audit.modes_checked;
        if (std::abs(z) > std::abs(audit.worst_z)) {
            audit.worst_z = z;
            audit.worst_k2 = k2x + k2z;
        }
        if (std::abs(z) > flag_sigmas) ++audit.modes_flagged;
    });
    audit.pass = audit.modes_flagged == 0;
    return audit;
}

}  // namespace ellsq
