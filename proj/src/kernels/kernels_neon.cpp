// NEON variants (aarch64). Two float64x2 accumulators give the same 4-lane
// blocking as the scalar reference; no fused multiply-add instructions are
// used so results stay bit-identical to the scalar path.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "ellsq/kernels.hpp"

namespace ellsq::kernels {
namespace {

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(double a, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
    for (; i < n; ++i) x[i] *= a;
}

void mul_neon(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] *= x[i];
}

void mul_to_neon(const double* x, const double* y, double* z, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(z + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

void complex_mul_real_neon(const double* m, std::complex<double>* c, std::size_t n) {
    double* d = reinterpret_cast<double*>(c);
    std::size_t i = 0;
    for (; i < n; ++i) {
        float64x2_t vm = vdupq_n_f64(m[i]);
        vst1q_f64(d + 2 * i, vmulq_f64(vld1q_f64(d + 2 * i), vm));
    }
}

void hermite_step_neon(const double* x, const double* hn, const double* hnm1,
                       double nc, double* out, std::size_t n) {
    const float64x2_t vnc = vdupq_n_f64(nc);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t t = vmulq_f64(vld1q_f64(x + i), vld1q_f64(hn + i));
        t = vsubq_f64(t, vmulq_f64(vnc, vld1q_f64(hnm1 + i)));
        vst1q_f64(out + i, t);
    }
    for (; i < n; ++i) out[i] = x[i] * hn[i] - nc * hnm1[i];
}

double sum_neon(const double* x, std::size_t n) {
    float64x2_t accA = vdupq_n_f64(0.0);  // lanes 0,1
    float64x2_t accB = vdupq_n_f64(0.0);  // lanes 2,3
    const std::size_t n4 = n / 4 * 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        accA = vaddq_f64(accA, vld1q_f64(x + i));
        accB = vaddq_f64(accB, vld1q_f64(x + i + 2));
    }
    double total = (vgetq_lane_f64(accA, 0) + vgetq_lane_f64(accA, 1)) +
                   (vgetq_lane_f64(accB, 0) + vgetq_lane_f64(accB, 1));
    for (std::size_t i = n4; i < n; ++i) total += x[i];
    return total;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t accA = vdupq_n_f64(0.0);
    float64x2_t accB = vdupq_n_f64(0.0);
    const std::size_t n4 = n / 4 * 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        accA = vaddq_f64(accA, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
        accB = vaddq_f64(accB, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
    }
    double total = (vgetq_lane_f64(accA, 0) + vgetq_lane_f64(accA, 1)) +
                   (vgetq_lane_f64(accB, 0) + vgetq_lane_f64(accB, 1));
    for (std::size_t i = n4; i < n; ++i) total += x[i] * y[i];
    return total;
}

double sum_sq_neon(const double* x, std::size_t n) { return dot_neon(x, x, n); }

double sup_abs_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
    double m = std::max(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double max_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(-INFINITY);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(x + i));
    double m = std::max(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
    for (; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

}  // namespace

const Ops& neon_ops() {
    static const Ops table = {
        axpy_neon,  scale_neon,   mul_neon,    mul_to_neon,
        complex_mul_real_neon,    hermite_step_neon,
        sum_neon,   dot_neon,     sum_sq_neon, sup_abs_neon,
        max_neon,   "neon",
    };
    return table;
}

}  // namespace ellsq::kernels

#endif  // __aarch64__
