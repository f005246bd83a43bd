#pragma once

#include <functional>

#include "ellsq/field.hpp"

namespace ellsq {

// FFT convention used throughout: the forward transform is the plain
// unnormalized sum  uhat(k) = sum_x u(x) e^{-i k.x},  and the inverse carries
// the 1/prod(N) factor, so fft_inverse(fft_forward(u)) == u. All spectral
// sums quoted in oracles follow this normalization.
SpectralField fft_forward(const RealField& u);
RealField fft_inverse(const SpectralField& s);

// Iterates the half-spectrum in storage order, passing |k|^2 and the
// Hermitian weight (2 for interior last-axis modes, 1 on the self-conjugate
// planes) so full dual-lattice sums can be taken over the r2c layout.
void spectral_for_each(const Grid& g,
                       const std::function<void(std::size_t idx, double k2, double weight)>& fn);

// Same iteration with |k|^2 split into the x-axes and z-axes contributions.
void spectral_for_each_split(
    const Grid& g,
    const std::function<void(std::size_t idx, double k2x, double k2z, double weight)>& fn);

// True when the coefficient at this half-spectrum index is constrained to be
// real for real fields (every axis at mode 0 or Nyquist).
bool is_self_conjugate_mode(const Grid& g, std::size_t spectral_index);

// Parseval sum sum_x u(x)^2 * cellvol evaluated spectrally:
// (cellvol/prodN) * sum over the full dual lattice of |uhat(k)|^2.
double spectral_l2_weighted(const SpectralField& s);

}  // namespace ellsq
