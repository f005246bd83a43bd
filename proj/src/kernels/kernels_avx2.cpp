// AVX2 variants. Compiled with -mavx2 only (no FMA, contraction off): each
// operation performs exactly the same multiplies and adds as the scalar path,
// so results are bit-identical. Reductions keep the 4-lane blocking of the
// scalar reference; lane combination extracts the lanes and adds them in the
// ((l0+l1)+(l2+l3)) order.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "ellsq/kernels.hpp"

namespace ellsq::kernels {
namespace {

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    for (; i < n; ++i) x[i] *= a;
}

void mul_avx2(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] *= x[i];
}

void mul_to_avx2(const double* x, const double* y, double* z, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

void complex_mul_real_avx2(const double* m, std::complex<double>* c, std::size_t n) {
    double* d = reinterpret_cast<double*>(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // two complex values = 4 doubles; duplicate multipliers pairwise
        __m128d mm = _mm_loadu_pd(m + i);
        __m256d vm = _mm256_set_m128d(_mm_unpackhi_pd(mm, mm), _mm_unpacklo_pd(mm, mm));
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), vm));
    }
    for (; i < n; ++i) {
        d[2 * i] *= m[i];
        d[2 * i + 1] *= m[i];
    }
}

void hermite_step_avx2(const double* x, const double* hn, const double* hnm1,
                       double nc, double* out, std::size_t n) {
    const __m256d vnc = _mm256_set1_pd(nc);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(hn + i));
        t = _mm256_sub_pd(t, _mm256_mul_pd(vnc, _mm256_loadu_pd(hnm1 + i)));
        _mm256_storeu_pd(out + i, t);
    }
    for (; i < n; ++i) out[i] = x[i] * hn[i] - nc * hnm1[i];
}

inline double combine_lanes(__m256d acc) {
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    return (l[0] + l[1]) + (l[2] + l[3]);
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n4 = n / 4 * 4;
    for (std::size_t i = 0; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double total = combine_lanes(acc);
    for (std::size_t i = n4; i < n; ++i) total += x[i];
    return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n4 = n / 4 * 4;
    for (std::size_t i = 0; i < n4; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    double total = combine_lanes(acc);
    for (std::size_t i = n4; i < n; ++i) total += x[i] * y[i];
    return total;
}

double sum_sq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

double sup_abs_avx2(const double* x, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    double m = std::max(std::max(l[0], l[1]), std::max(l[2], l[3]));
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double max_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_set1_pd(-INFINITY);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    double m = std::max(std::max(l[0], l[1]), std::max(l[2], l[3]));
    for (; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

}  // namespace

bool avx2_available() { return __builtin_cpu_supports("avx2"); }

const Ops& avx2_ops() {
    static const Ops table = {
        axpy_avx2,  scale_avx2,   mul_avx2,    mul_to_avx2,
        complex_mul_real_avx2,    hermite_step_avx2,
        sum_avx2,   dot_avx2,     sum_sq_avx2, sup_abs_avx2,
        max_avx2,   "avx2",
    };
    return table;
}

}  // namespace ellsq::kernels

#endif  // __x86_64__
