#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Data-parallel inner loops used by the spectral machinery. Scalar reference
// implementations always exist; an AVX2 lane is selected at runtime when the
// CPU supports it. Override with G5_KERNELS=scalar|avx2.
namespace g5::kern {

using cplx = std::complex<double>;

struct Ops {
    // y[i] += a*x[i]
    void (*axpy)(double* y, double a, const double* x, std::size_t n);
    // x[i] *= a
    void (*scal)(double* x, double a, std::size_t n);
    // z[i] = x[i]*y[i]
    void (*vmul)(double* z, const double* x, const double* y, std::size_t n);
    // sum x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum x[i]^2
    double (*sumsq)(const double* x, std::size_t n);
    // max |x[i]|
    double (*supnorm)(const double* x, std::size_t n);
    // z[i] *= c[i]  (complex)
    void (*cmul)(cplx* z, const cplx* c, std::size_t n);
    // out[i] = e[i]*u[i] + q[i]*v[i]  (complex; ETDRK4 half-step stage)
    void (*cstage)(cplx* out, const cplx* e, const cplx* u, const cplx* q, const cplx* v,
                   std::size_t n);
    // out[i] = e[i]*u[i] + f1[i]*a[i] + 2*f2[i]*(b[i]+c[i]) + f3[i]*d[i]  (complex)
    void (*ccombine)(cplx* out, const cplx* e, const cplx* u, const cplx* f1, const cplx* a,
                     const cplx* f2, const cplx* b, const cplx* c, const cplx* f3, const cplx* d,
                     std::size_t n);
    // sum w[i]*|z[i]|^2  (real weights, complex samples)
    double (*wsumsq)(const double* w, const cplx* z, std::size_t n);
    // Fused Gardner nonlinearity on the padded grid:
    // out[i] = -( c_ww3*w*w3 + c_w1w2*w1*w2 + c_w2w1*w^2*w1
    //            + 10*w^2*w3 + 10*w1^3 + 40*w*w1*w2 + 30*w^4*w1
    //            + c_ww1*w*w1 + c_w3w1*w^3*w1 )
    void (*gardner_nl)(double* out, const double* w, const double* w1, const double* w2,
                       const double* w3, double c_ww3, double c_w1w2, double c_w2w1,
                       double c_ww1, double c_w3w1, std::size_t n);
};

const Ops& scalar_ops();
#if defined(G5_HAVE_AVX2)
const Ops& avx2_ops();
#endif

// Active dispatch table (chosen once, thread-safe).
const Ops& ops();
// Name of the active lane: "scalar" or "avx2".
const std::string& active_lane();

}  // namespace g5::kern
