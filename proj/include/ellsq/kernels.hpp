#pragma once

#include <complex>
#include <cstddef>

namespace ellsq::kernels {

// Data-parallel inner loops used by the field and estimator code. Every entry
// has a scalar reference implementation plus SIMD variants (AVX2 on x86-64,
// NEON on aarch64) selected once at startup. All variants are required to be
// bit-identical to the scalar path: multiplies/adds are emitted without
// fp-contraction, and reductions use a fixed 4-lane blocking with the combine
// tree ((l0+l1)+(l2+l3)) followed by a sequential tail, in every backend.
// Transcendental loops (exp, log, Box-Muller) stay on libm on purpose; they
// are not part of this table.
struct Ops {
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x[i] *= a
    void (*scale)(double a, double* x, std::size_t n);
    // y[i] *= x[i]
    void (*mul)(const double* x, double* y, std::size_t n);
    // z[i] = x[i] * y[i]
    void (*mul_to)(const double* x, const double* y, double* z, std::size_t n);
    // c[i] *= m[i]  (complex coefficient times real multiplier)
    void (*complex_mul_real)(const double* m, std::complex<double>* c, std::size_t n);
    // out[i] = x[i] * hn[i] - nc * hnm1[i]   (Hermite recurrence step)
    void (*hermite_step)(const double* x, const double* hn, const double* hnm1,
                         double nc, double* out, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    double (*sup_abs)(const double* x, std::size_t n);
    double (*max)(const double* x, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();

#if defined(__x86_64__)
bool avx2_available();
const Ops& avx2_ops();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif

// Dispatched table (best available backend unless overridden).
const Ops& ops();
const char* active_backend();

// Test hook: "scalar", "avx2", "neon" or "auto". Throws std::invalid_argument
// if the backend is unknown or not available on this machine.
void force_backend(const char* name);

}  // namespace ellsq::kernels
