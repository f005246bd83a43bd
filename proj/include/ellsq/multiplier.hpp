#pragma once

#include <functional>

#include "ellsq/fft.hpp"

namespace ellsq {

// A real, radial Fourier multiplier m(k) tabulated over the half-spectrum of
// a fixed grid. All linear operators in the artifact (the resolvent, the
// Laplacian symbol, mollifiers, Littlewood-Paley windows) are of this form;
// the Laplacian uses the continuum symbol |k|^2 on the dual lattice.
class SpectralMultiplier {
  public:
    SpectralMultiplier() = default;
    SpectralMultiplier(const Grid& g, const std::function<double(double k2)>& profile);
    SpectralMultiplier(const Grid& g, AlignedVector<double> values);

    const Grid& grid() const { return grid_; }
    const double* values() const { return values_.data(); }
    std::size_t size() const { return values_.size(); }

    void apply(SpectralField& s) const;
    // fft -> multiply -> inverse fft
    RealField convolve(const RealField& u) const;

    // (1/vol) * sum over the full dual lattice of m(k)^2; this is the
    // per-site variance of the multiplier applied to unit white noise.
    double variance_sum() const;
    // pointwise combination with another multiplier on the same grid
    SpectralMultiplier times(const SpectralMultiplier& other) const;

    double max_abs() const;
    double min_value() const;

  private:
    Grid grid_;
    AlignedVector<double> values_;
};

// resolvent symbol (|k|^2 + m^2)^(-q)
SpectralMultiplier green_multiplier(const Grid& g, double m2, int q);
// (|k|^2 + m^2)^(+q)
SpectralMultiplier inverse_green_multiplier(const Grid& g, double m2, int q);

// The operator (-Delta + m^2 + L)^(-q) as data: mass and exponent. The
// z-direction part of the operator is diagonalized jointly with the x-part,
// so the symbol is (sum_axes k_j^2 + m^2)^(-q).
struct GreenOp {
    double m2 = 1.0;
    int q = 1;
};

RealField green_apply(const RealField& u, const GreenOp& op);

// z -> u(0, z) over the z-axes (site at x = 0 exists by construction)
RealField restrict_to_origin(const RealField& u);

}  // namespace ellsq
