#include "ellsq/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ellsq {
namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

// One plan pair per dims vector, created with FFTW_ESTIMATE so planning is
// deterministic, then executed on caller buffers via the new-array interface.
// All field buffers are 64-byte aligned, matching the alignment class of the
// fftw_malloc'd scratch the plans were created on. Planning is serialized;
// execution is thread-safe.
PlanPair& plans_for(const Grid& g) {
    static std::map<std::vector<int>, PlanPair> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(g.dims());
    if (it != cache.end()) return it->second;

    const int rank = g.rank();
    std::vector<int> n = g.dims();
    const std::size_t nreal = static_cast<std::size_t>(g.n_sites());
    const std::size_t nspec = SpectralField::spectral_size(g);
    double* rbuf = fftw_alloc_real(nreal);
    fftw_complex* cbuf = fftw_alloc_complex(nspec);
    PlanPair p;
    p.fwd = fftw_plan_dft_r2c(rank, n.data(), rbuf, cbuf, FFTW_ESTIMATE);
    p.inv = fftw_plan_dft_c2r(rank, n.data(), cbuf, rbuf, FFTW_ESTIMATE);
    fftw_free(rbuf);
    fftw_free(cbuf);
    if (!p.fwd || !p.inv) throw std::runtime_error("fftw planning failed");
    return cache.emplace(g.dims(), p).first->second;
}

}  // namespace

SpectralField fft_forward(const RealField& u) {
    const Grid& g = u.grid();
    SpectralField out(g);
    if (g.rank() == 0) {
        out[0] = std::complex<double>(u[0], 0.0);
        return out;
    }
    PlanPair& p = plans_for(g);
    fftw_execute_dft_r2c(p.fwd, const_cast<double*>(u.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

RealField fft_inverse(const SpectralField& s) {
    const Grid& g = s.grid();
    RealField out(g);
    if (g.rank() == 0) {
        out[0] = s[0].real();
        return out;
    }
    // multi-dimensional c2r transforms destroy their input; work on a copy
    AlignedVector<std::complex<double>> scratch(s.data(), s.data() + s.size());
    PlanPair& p = plans_for(g);
    fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    scale(1.0 / static_cast<double>(g.n_sites()), out);
    return out;
}

void spectral_for_each_split(
    const Grid& g,
    const std::function<void(std::size_t, double, double, double)>& fn) {
    if (g.rank() == 0) {
        fn(0, 0.0, 0.0, 1.0);
        return;
    }
    const int rank = g.rank();
    const int last = rank - 1;
    const int nx = g.n_x_axes();
    const int nlast = g.points(last) / 2 + 1;
    std::vector<int> idx(rank, 0);
    std::size_t flat = 0;
    while (true) {
        double k2x_head = 0.0, k2z_head = 0.0;
        for (int a = 0; a < last; ++a) {
            const double k = g.frequency(a, idx[a]);
            (a < nx ? k2x_head : k2z_head) += k * k;
        }
        for (int il = 0; il < nlast; ++il) {
            const double kl = 2.0 * std::numbers::pi * il / g.extent(last);
            const double weight = (il == 0 || il == g.points(last) / 2) ? 1.0 : 2.0;
            const double kl2 = kl * kl;
            if (last < nx)
                fn(flat++, k2x_head + kl2, k2z_head, weight);
            else
                fn(flat++, k2x_head, k2z_head + kl2, weight);
        }
        int a = last - 1;
        for (; a >= 0; --a) {
            if (++idx[a] < g.points(a)) break;
            idx[a] = 0;
        }
        if (a < 0) break;
    }
}

void spectral_for_each(const Grid& g,
                       const std::function<void(std::size_t, double, double)>& fn) {
    spectral_for_each_split(
        g, [&fn](std::size_t i, double k2x, double k2z, double w) { fn(i, k2x + k2z, w); });
}

bool is_self_conjugate_mode(const Grid& g, std::size_t spectral_index) {
    if (g.rank() == 0) return true;
    const int rank = g.rank();
    const int last = rank - 1;
    std::size_t rem = spectral_index;
    const int nlast = g.points(last) / 2 + 1;
    const int il = static_cast<int>(rem % nlast);
    rem /= nlast;
    if (il != 0 && il != g.points(last) / 2) return false;
    for (int a = last - 1; a >= 0; --a) {
        const int ia = static_cast<int>(rem % g.points(a));
        rem /= g.points(a);
        if (ia != 0 && ia != g.points(a) / 2) return false;
    }
    return true;
}

double spectral_l2_weighted(const SpectralField& s) {
    const Grid& g = s.grid();
    double acc = 0.0;
    spectral_for_each(g, [&](std::size_t i, double, double w) {
        acc += w * std::norm(s[i]);
    });
    return acc * g.cell_volume() / static_cast<double>(g.n_sites());
}

}  // namespace ellsq
