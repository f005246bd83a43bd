#include "ellsq/multiplier.hpp"

#include <cmath>
#include <stdexcept>

namespace ellsq {

SpectralMultiplier::SpectralMultiplier(const Grid& g,
                                       const std::function<double(double)>& profile)
    : grid_(g), values_(SpectralField::spectral_size(g), 0.0) {
    spectral_for_each(g, [&](std::size_t i, double k2, double) { values_[i] = profile(k2); });
}

SpectralMultiplier::SpectralMultiplier(const Grid& g, AlignedVector<double> values)
    : grid_(g), values_(std::move(values)) {
    if (values_.size() != SpectralField::spectral_size(g))
        throw std::invalid_argument("multiplier: value table size mismatch");
}

void SpectralMultiplier::apply(SpectralField& s) const {
    if (s.grid() != grid_) throw std::invalid_argument("multiplier: grid mismatch");
    kernels::ops().complex_mul_real(values_.data(), s.data(), s.size());
}

RealField SpectralMultiplier::convolve(const RealField& u) const {
    SpectralField s = fft_forward(u);
    apply(s);
    return fft_inverse(s);
}

double SpectralMultiplier::variance_sum() const {
    double acc = 0.0;
    spectral_for_each(grid_, [&](std::size_t i, double, double w) {
        acc += w * values_[i] * values_[i];
    });
    return acc / grid_.volume();
}

SpectralMultiplier SpectralMultiplier::times(const SpectralMultiplier& other) const {
    if (other.grid_ != grid_) throw std::invalid_argument("multiplier: grid mismatch");
    SpectralMultiplier out;
    out.grid_ = grid_;
    out.values_ = values_;
    kernels::ops().mul(other.values_.data(), out.values_.data(), out.values_.size());
    return out;
}

double SpectralMultiplier::max_abs() const {
    return kernels::ops().sup_abs(values_.data(), values_.size());
}

double SpectralMultiplier::min_value() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
}

SpectralMultiplier green_multiplier(const Grid& g, double m2, int q) {
    if (!(m2 > 0.0)) throw std::invalid_argument("green: m^2 must be positive");
    if (q != 1 && q != 2) throw std::invalid_argument("green: exponent q must be 1 or 2");
    return SpectralMultiplier(g, [m2, q](double k2) {
        const double r = 1.0 / (k2 + m2);
        return q == 1 ? r : r * r;
    });
}

SpectralMultiplier inverse_green_multiplier(const Grid& g, double m2, int q) {
    if (!(m2 > 0.0)) throw std::invalid_argument("green: m^2 must be positive");
    if (q != 1 && q != 2) throw std::invalid_argument("green: exponent q must be 1 or 2");
    return SpectralMultiplier(g, [m2, q](double k2) {
        const double r = k2 + m2;
        return q == 1 ? r : r * r;
    });
}

RealField green_apply(const RealField& u, const GreenOp& op) {
    return green_multiplier(u.grid(), op.m2, op.q).convolve(u);
}

RealField restrict_to_origin(const RealField& u) {
    const Grid& g = u.grid();
    if (g.n_x_axes() == 0) return u;
    const Grid zg = g.z_slice();
    RealField out(zg);
    // with x-indices pinned to 0 the z-block is the leading contiguous block
    // of the row-major x-major layout
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i];
    return out;
}

bool RealField::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace ellsq
