#pragma once

#include <complex>
#include <cstdlib>
#include <limits>
#include <new>
#include <vector>

#include "ellsq/grid.hpp"
#include "ellsq/kernels.hpp"

namespace ellsq {

// 64-byte aligned storage: keeps FFTW's SIMD paths and our kernels on the
// same alignment class for every buffer.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) {}
    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        void* p = std::aligned_alloc(64, ((n * sizeof(T) + 63) / 64) * 64);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { std::free(p); }
    template <class U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

// Real-valued lattice field, one value per site, row-major.
class RealField {
  public:
    RealField() = default;
    explicit RealField(const Grid& g, double fill = 0.0)
        : grid_(g), data_(static_cast<std::size_t>(g.n_sites()), fill) {}

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return data_.size(); }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    bool all_finite() const;

  private:
    Grid grid_;
    AlignedVector<double> data_;
};

// Fourier coefficients of a real field in half-spectrum (r2c) layout: the
// last axis is truncated to N/2+1 coefficients, the redundant half being
// fixed by the Hermitian symmetry c(-k) = conj(c(k)).
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const Grid& g)
        : grid_(g), data_(spectral_size(g), std::complex<double>(0.0, 0.0)) {}

    static std::size_t spectral_size(const Grid& g) {
        if (g.rank() == 0) return 1;
        std::size_t n = 1;
        for (int a = 0; a + 1 < g.rank(); ++a) n *= g.points(a);
        return n * (g.points(g.rank() - 1) / 2 + 1);
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return data_.size(); }
    std::complex<double>* data() { return data_.data(); }
    const std::complex<double>* data() const { return data_.data(); }
    std::complex<double>& operator[](std::size_t i) { return data_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return data_[i]; }

  private:
    Grid grid_;
    AlignedVector<std::complex<double>> data_;
};

// elementwise helpers (kernel-backed)
inline void axpy(double a, const RealField& x, RealField& y) {
    kernels::ops().axpy(a, x.data(), y.data(), y.size());
}
inline void scale(double a, RealField& x) { kernels::ops().scale(a, x.data(), x.size()); }
inline double sup_abs(const RealField& x) { return kernels::ops().sup_abs(x.data(), x.size()); }
inline double field_sum(const RealField& x) { return kernels::ops().sum(x.data(), x.size()); }
inline double field_dot(const RealField& x, const RealField& y) {
    return kernels::ops().dot(x.data(), y.data(), x.size());
}

}  // namespace ellsq
