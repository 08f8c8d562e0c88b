// AVX2/FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; dispatch guarantees it never runs on unsupported CPUs.
#include "g5/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace g5::kern {
namespace {

void axpy_v(double* y, double a, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_v(double* x, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void vmul_v(double* z, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_v(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sumsq_v(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double supnorm_v(const double* x, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_max_pd(lo, hi);
    double m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

// complex multiply on interleaved (re,im) pairs: two complex per 256-bit lane
inline __m256d cmul4(__m256d z, __m256d c) {
    __m256d c_re = _mm256_movedup_pd(c);                  // (cr,cr,cr,cr)
    __m256d c_im = _mm256_permute_pd(c, 0xF);             // (ci,ci,ci,ci)
    __m256d z_sw = _mm256_permute_pd(z, 0x5);             // (zi,zr,zi,zr)
    return _mm256_fmaddsub_pd(c_re, z, _mm256_mul_pd(c_im, z_sw));
}

void cmul_v(cplx* z, const cplx* c, std::size_t n) {
    auto* zd = reinterpret_cast<double*>(z);
    const auto* cd = reinterpret_cast<const double*>(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vz = _mm256_loadu_pd(zd + 2 * i);
        __m256d vc = _mm256_loadu_pd(cd + 2 * i);
        _mm256_storeu_pd(zd + 2 * i, cmul4(vz, vc));
    }
    for (; i < n; ++i) z[i] *= c[i];
}

void cstage_v(cplx* out, const cplx* e, const cplx* u, const cplx* q, const cplx* v,
              std::size_t n) {
    auto* od = reinterpret_cast<double*>(out);
    const auto* ed = reinterpret_cast<const double*>(e);
    const auto* ud = reinterpret_cast<const double*>(u);
    const auto* qd = reinterpret_cast<const double*>(q);
    const auto* vd = reinterpret_cast<const double*>(v);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d r = _mm256_add_pd(cmul4(_mm256_loadu_pd(ud + 2 * i), _mm256_loadu_pd(ed + 2 * i)),
                                  cmul4(_mm256_loadu_pd(vd + 2 * i), _mm256_loadu_pd(qd + 2 * i)));
        _mm256_storeu_pd(od + 2 * i, r);
    }
    for (; i < n; ++i) out[i] = e[i] * u[i] + q[i] * v[i];
}

void ccombine_v(cplx* out, const cplx* e, const cplx* u, const cplx* f1, const cplx* a,
                const cplx* f2, const cplx* b, const cplx* c, const cplx* f3, const cplx* d,
                std::size_t n) {
    auto* od = reinterpret_cast<double*>(out);
    const auto* ed = reinterpret_cast<const double*>(e);
    const auto* ud = reinterpret_cast<const double*>(u);
    const auto* f1d = reinterpret_cast<const double*>(f1);
    const auto* ad = reinterpret_cast<const double*>(a);
    const auto* f2d = reinterpret_cast<const double*>(f2);
    const auto* bd = reinterpret_cast<const double*>(b);
    const auto* cd = reinterpret_cast<const double*>(c);
    const auto* f3d = reinterpret_cast<const double*>(f3);
    const auto* dd = reinterpret_cast<const double*>(d);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d r = cmul4(_mm256_loadu_pd(ud + 2 * i), _mm256_loadu_pd(ed + 2 * i));
        r = _mm256_add_pd(r, cmul4(_mm256_loadu_pd(ad + 2 * i), _mm256_loadu_pd(f1d + 2 * i)));
        __m256d bc = _mm256_add_pd(_mm256_loadu_pd(bd + 2 * i), _mm256_loadu_pd(cd + 2 * i));
        r = _mm256_add_pd(r, _mm256_mul_pd(two, cmul4(bc, _mm256_loadu_pd(f2d + 2 * i))));
        r = _mm256_add_pd(r, cmul4(_mm256_loadu_pd(dd + 2 * i), _mm256_loadu_pd(f3d + 2 * i)));
        _mm256_storeu_pd(od + 2 * i, r);
    }
    for (; i < n; ++i)
        out[i] = e[i] * u[i] + f1[i] * a[i] + 2.0 * f2[i] * (b[i] + c[i]) + f3[i] * d[i];
}

double wsumsq_v(const double* w, const cplx* z, std::size_t n) {
    const auto* zd = reinterpret_cast<const double*>(z);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(zd + 2 * i);
        __m256d sq = _mm256_mul_pd(v, v);                       // (r0^2,i0^2,r1^2,i1^2)
        __m256d sw = _mm256_permute_pd(sq, 0x5);
        __m256d nrm = _mm256_add_pd(sq, sw);                    // |z|^2 duplicated
        __m256d wv = _mm256_set_pd(w[i + 1], w[i + 1], w[i], w[i]);
        acc = _mm256_fmadd_pd(wv, nrm, acc);
    }
    double s = hsum(acc) * 0.5;
    for (; i < n; ++i) s += w[i] * std::norm(z[i]);
    return s;
}

void gardner_nl_v(double* out, const double* w, const double* w1, const double* w2,
                  const double* w3, double c_ww3, double c_w1w2, double c_w2w1, double c_ww1,
                  double c_w3w1, std::size_t n) {
    const __m256d k_ww3 = _mm256_set1_pd(c_ww3);
    const __m256d k_w1w2 = _mm256_set1_pd(c_w1w2);
    const __m256d k_w2w1 = _mm256_set1_pd(c_w2w1);
    const __m256d k_ww1 = _mm256_set1_pd(c_ww1);
    const __m256d k_w3w1 = _mm256_set1_pd(c_w3w1);
    const __m256d k10 = _mm256_set1_pd(10.0);
    const __m256d k40 = _mm256_set1_pd(40.0);
    const __m256d k30 = _mm256_set1_pd(30.0);
    const __m256d neg = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vw = _mm256_loadu_pd(w + i);
        __m256d va = _mm256_loadu_pd(w1 + i);
        __m256d vb = _mm256_loadu_pd(w2 + i);
        __m256d vc = _mm256_loadu_pd(w3 + i);
        __m256d w2i = _mm256_mul_pd(vw, vw);
        __m256d acc = _mm256_mul_pd(k_ww3, _mm256_mul_pd(vw, vc));
        acc = _mm256_fmadd_pd(k_w1w2, _mm256_mul_pd(va, vb), acc);
        acc = _mm256_fmadd_pd(k_w2w1, _mm256_mul_pd(w2i, va), acc);
        acc = _mm256_fmadd_pd(k10, _mm256_mul_pd(w2i, vc), acc);
        acc = _mm256_fmadd_pd(k10, _mm256_mul_pd(va, _mm256_mul_pd(va, va)), acc);
        acc = _mm256_fmadd_pd(k40, _mm256_mul_pd(vw, _mm256_mul_pd(va, vb)), acc);
        acc = _mm256_fmadd_pd(k30, _mm256_mul_pd(_mm256_mul_pd(w2i, w2i), va), acc);
        acc = _mm256_fmadd_pd(k_ww1, _mm256_mul_pd(vw, va), acc);
        acc = _mm256_fmadd_pd(k_w3w1, _mm256_mul_pd(_mm256_mul_pd(w2i, vw), va), acc);
        _mm256_storeu_pd(out + i, _mm256_xor_pd(acc, neg));
    }
    for (; i < n; ++i) {
        const double wi = w[i], a = w1[i], b = w2[i], c = w3[i];
        const double w2s = wi * wi;
        out[i] = -(c_ww3 * wi * c + c_w1w2 * a * b + c_w2w1 * w2s * a + 10.0 * w2s * c +
                   10.0 * a * a * a + 40.0 * wi * a * b + 30.0 * w2s * w2s * a + c_ww1 * wi * a +
                   c_w3w1 * w2s * wi * a);
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{axpy_v,    scal_v,   vmul_v,    dot_v,      sumsq_v,
                         supnorm_v, cmul_v,   cstage_v,  ccombine_v, wsumsq_v,
                         gardner_nl_v};
    return ops;
}

}  // namespace g5::kern
