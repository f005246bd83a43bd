#include "ellsq/kernels.hpp"

#include <cmath>

// Reference implementations. The reductions are written against the fixed
// blocking contract in kernels.hpp, not as naive running sums, so that the
// SIMD backends can reproduce them bit for bit.

namespace ellsq::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void mul_scalar(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= x[i];
}

void mul_to_scalar(const double* x, const double* y, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void complex_mul_real_scalar(const double* m, std::complex<double>* c, std::size_t n) {
    double* d = reinterpret_cast<double*>(c);
    for (std::size_t i = 0; i < n; ++i) {
        d[2 * i] *= m[i];
        d[2 * i + 1] *= m[i];
    }
}

void hermite_step_scalar(const double* x, const double* hn, const double* hnm1,
                         double nc, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * hn[i] - nc * hnm1[i];
}

double sum_scalar(const double* x, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t n4 = n / 4 * 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        l0 += x[i];
        l1 += x[i + 1];
        l2 += x[i + 2];
        l3 += x[i + 3];
    }
    double total = (l0 + l1) + (l2 + l3);
    for (std::size_t i = n4; i < n; ++i) total += x[i];
    return total;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t n4 = n / 4 * 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        l0 += x[i] * y[i];
        l1 += x[i + 1] * y[i + 1];
        l2 += x[i + 2] * y[i + 2];
        l3 += x[i + 3] * y[i + 3];
    }
    double total = (l0 + l1) + (l2 + l3);
    for (std::size_t i = n4; i < n; ++i) total += x[i] * y[i];
    return total;
}

double sum_sq_scalar(const double* x, std::size_t n) { return dot_scalar(x, x, n); }

double sup_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double max_scalar(const double* x, std::size_t n) {
    double m = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        axpy_scalar,  scale_scalar,   mul_scalar,    mul_to_scalar,
        complex_mul_real_scalar,      hermite_step_scalar,
        sum_scalar,   dot_scalar,     sum_sq_scalar, sup_abs_scalar,
        max_scalar,   "scalar",
    };
    return table;
}

}  // namespace ellsq::kernels
