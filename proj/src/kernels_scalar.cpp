#include "g5/kernels.hpp"

#include <cmath>

namespace g5::kern {
namespace {

void axpy_s(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_s(double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void vmul_s(double* z, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

double dot_s(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sumsq_s(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double supnorm_s(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

void cmul_s(cplx* z, const cplx* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] *= c[i];
}

void cstage_s(cplx* out, const cplx* e, const cplx* u, const cplx* q, const cplx* v,
              std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = e[i] * u[i] + q[i] * v[i];
}

void ccombine_s(cplx* out, const cplx* e, const cplx* u, const cplx* f1, const cplx* a,
                const cplx* f2, const cplx* b, const cplx* c, const cplx* f3, const cplx* d,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = e[i] * u[i] + f1[i] * a[i] + 2.0 * f2[i] * (b[i] + c[i]) + f3[i] * d[i];
}

double wsumsq_s(const double* w, const cplx* z, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::norm(z[i]);
    return acc;
}

void gardner_nl_s(double* out, const double* w, const double* w1, const double* w2,
                  const double* w3, double c_ww3, double c_w1w2, double c_w2w1, double c_ww1,
                  double c_w3w1, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = w[i], a = w1[i], b = w2[i], c = w3[i];
        const double w2i = wi * wi;
        out[i] = -(c_ww3 * wi * c + c_w1w2 * a * b + c_w2w1 * w2i * a + 10.0 * w2i * c +
                   10.0 * a * a * a + 40.0 * wi * a * b + 30.0 * w2i * w2i * a + c_ww1 * wi * a +
                   c_w3w1 * w2i * wi * a);
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{axpy_s,   scal_s,    vmul_s,    dot_s,       sumsq_s,
                         supnorm_s, cmul_s,   cstage_s,  ccombine_s,  wsumsq_s,
                         gardner_nl_s};
    return ops;
}

}  // namespace g5::kern
