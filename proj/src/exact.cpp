#include "g5/exact.hpp"

#include <cmath>
#include <stdexcept>

#include "g5/kernels.hpp"

namespace g5::exact {
namespace {

constexpr double kPi = 3.14159265358979323846;

// FG bundle rescaled by s = max(|f|, |g|, 1). Every quantity built from it is
// a ratio of equal-degree monomials, so the rescaling cancels; it keeps the
// degree-6 composites (B_xx) finite where cosh(b y2)^6 would overflow.
struct NormParts {
    double f, f1, f2, f3, f4;
    double g, g1, g2, g3, g4;
    double ch, sh, e2;  // cosh(b y2)/s, sinh(b y2)/s, e^{b y2}/s
    double D;           // (f^2+g^2)/s^2
};

struct PhaseCoef {
    double d5, g5, r, sD, Delta;
};

PhaseCoef coef(const BreatherParams& p) {
    PhaseCoef c;
    c.Delta = p.delta();
    c.r = std::sqrt(p.alpha * p.alpha + p.beta * p.beta);
    c.sD = std::sqrt(c.Delta);
    c.d5 = p.delta5();
    c.g5 = p.gamma5();
    return c;
}

FGParts raw_parts(const BreatherParams& p, const PhaseCoef& c, double t, double x) {
    const double a = p.alpha, b = p.beta, mu = p.mu;
    const double y1 = x + c.d5 * t + p.x1;
    const double y2 = x + c.g5 * t + p.x2;
    const double ca = std::cos(a * y1), sa = std::sin(a * y1);
    const double ch = std::cosh(b * y2), sh = std::sinh(b * y2);
    const double e2 = ch + sh;
    const double q = 2.0 * b * mu / (c.r * c.sD);
    FGParts P;
    P.f = ch - (q / a) * (a * ca - b * sa);
    P.f1 = b * sh + q * (b * ca + a * sa);
    P.f2 = b * c.g5 * sh + q * c.d5 * (b * ca + a * sa);
    P.f3 = b * b * ch + q * a * (a * ca - b * sa);
    P.f4 = b * b * b * sh - q * a * a * (b * ca + a * sa);
    const double w = 2.0 * b * mu / c.Delta;
    P.g = (b * c.r / (a * c.sD)) * sa - w * e2;
    P.g1 = (b * c.r / c.sD) * ca - b * w * e2;
    P.g2 = (b * c.d5 * c.r / c.sD) * ca - b * c.g5 * w * e2;
    P.g3 = -(a * b * c.r / c.sD) * sa - b * b * w * e2;
    P.g4 = -(a * a * b * c.r / c.sD) * ca - b * b * b * w * e2;
    P.D = P.f * P.f + P.g * P.g;
    return P;
}

NormParts norm_parts(const BreatherParams& p, const PhaseCoef& c, double t, double x) {
    const double b = p.beta;
    const double y2 = x + c.g5 * t + p.x2;
    FGParts P = raw_parts(p, c, t, x);
    const double s = std::max({std::fabs(P.f), std::fabs(P.g), 1.0});
    NormParts N;
    N.f = P.f / s;
    N.f1 = P.f1 / s;
    N.f2 = P.f2 / s;
    N.f3 = P.f3 / s;
    N.f4 = P.f4 / s;
    N.g = P.g / s;
    N.g1 = P.g1 / s;
    N.g2 = P.g2 / s;
    N.g3 = P.g3 / s;
    N.g4 = P.g4 / s;
    N.ch = std::cosh(b * y2) / s;
    N.sh = std::sinh(b * y2) / s;
    N.e2 = N.ch + N.sh;
    N.D = N.f * N.f + N.g * N.g;
    return N;
}

double B_of(const NormParts& n) { return 2.0 * (n.g1 * n.f - n.f1 * n.g) / n.D; }

double Bt_tilde_of(const NormParts& n) { return 2.0 * (n.g2 * n.f - n.f2 * n.g) / n.D; }

double Bx_of(const NormParts& n) {
    const double f = n.f, f1 = n.f1, f3 = n.f3, g = n.g, g1 = n.g1, g3 = n.g3, D = n.D;
    return (2.0 / (D * D)) *
           (f * f * f * g3 - f * f * (2.0 * f1 * g1 + f3 * g) +
            f * g * (2.0 * f1 * f1 + g * g3 - 2.0 * g1 * g1) + g * g * (2.0 * f1 * g1 - f3 * g));
}

double Bxx_of(const NormParts& n) {
    const double f = n.f, f1 = n.f1, f3 = n.f3, f4 = n.f4;
    const double g = n.g, g1 = n.g1, g3 = n.g3, g4 = n.g4, D = n.D;
    const double m1 =
        std::pow(f, 5) * g4 - std::pow(f, 4) * (3.0 * f1 * g3 + 3.0 * f3 * g1 + f4 * g) +
        2.0 * std::pow(f, 3) *
            (3.0 * f1 * f1 * g1 + 3.0 * f1 * f3 * g + g * g * g4 - 3.0 * g * g1 * g3 -
             g1 * g1 * g1) -
        2.0 * f * f * g * (3.0 * std::pow(f1, 3) - 9.0 * f1 * g1 * g1 + f4 * g * g) +
        f * g * g *
            (-18.0 * f1 * f1 * g1 + 6.0 * f1 * f3 * g + g * g * g4 - 6.0 * g * g1 * g3 +
             6.0 * std::pow(g1, 3)) +
        std::pow(g, 3) * (2.0 * std::pow(f1, 3) + f1 * (3.0 * g * g3 - 6.0 * g1 * g1) +
                          g * (3.0 * f3 * g1 - f4 * g));
    return 2.0 * m1 / std::pow(D, 3);
}

double d2_log_d_of(const NormParts& n) {
    const double Dx = 2.0 * (n.f * n.f1 + n.g * n.g1);
    const double Dxx = 2.0 * (n.f1 * n.f1 + n.f * n.f3 + n.g1 * n.g1 + n.g * n.g3);
    return (n.D * Dxx - Dx * Dx) / (n.D * n.D);
}

RealField sample(const BreatherParams& p, double t, const GridPtr& grid,
                 double (*fn)(const NormParts&)) {
    p.validate();
    const PhaseCoef c = coef(p);
    RealField out = RealField::zeros(grid);
    for (std::size_t i = 0; i < grid->n(); ++i)
        out[i] = fn(norm_parts(p, c, t, grid->node(i)));
    return out;
}

double unwrap_near(double value, double ref) {
    while (value - ref > kPi) value -= 2.0 * kPi;
    while (value - ref < -kPi) value += 2.0 * kPi;
    return value;
}

}  // namespace

void SolitonParams::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("SolitonParams: mu must be > 0");
    if (!(c > 0.0)) throw std::invalid_argument("SolitonParams: c must be > 0");
}

double BreatherParams::delta5() const {
    const double a2 = alpha * alpha, b2 = beta * beta, m2 = mu * mu;
    return -a2 * a2 + 10.0 * a2 * b2 - 5.0 * b2 * b2 + 10.0 * (a2 - 3.0 * b2) * m2;
}

double BreatherParams::gamma5() const {
    const double a2 = alpha * alpha, b2 = beta * beta, m2 = mu * mu;
    return -b2 * b2 + 10.0 * a2 * b2 - 5.0 * a2 * a2 + 10.0 * (3.0 * a2 - b2) * m2;
}

void BreatherParams::validate() const {
    if (alpha == 0.0 || beta == 0.0)
        throw std::invalid_argument("BreatherParams: alpha, beta must be nonzero");
    if (!(mu > 0.0)) throw std::invalid_argument("BreatherParams: mu must be > 0");
    if (!(delta() > 0.0))
        throw std::invalid_argument(
            "BreatherParams: requires alpha^2 + beta^2 - 4 mu^2 > 0 (mu below "
            "sqrt(alpha^2+beta^2)/2)");
}

FGParts breather_fg(const BreatherParams& p, double t, double x) {
    p.validate();
    return raw_parts(p, coef(p), t, x);
}

RealField soliton_eval(const SolitonParams& p, double t, const GridPtr& grid) {
    p.validate();
    const double root = std::sqrt(4.0 * p.mu * p.mu + p.c);
    const double sc = std::sqrt(p.c);
    const double v = p.speed();
    RealField out = RealField::zeros(grid);
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const double z = grid->node(i) - v * t + p.x1;
        out[i] = p.c / (2.0 * p.mu + root * std::cosh(sc * z));
    }
    return out;
}

SolitonResiduals soliton_residuals(const SolitonParams& p, const GridPtr& grid) {
    RealField q = soliton_eval(p, 0.0, grid);
    require_decay(q, 1e-12, "soliton");
    require_resolved(q, "soliton");
    RealField q1 = Spectral::derivative(q, 1);
    RealField q2 = Spectral::derivative(q, 2);
    RealField q4 = Spectral::derivative(q, 4);
    const double v = p.speed(), mu = p.mu, c = p.c;
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double Q = q[i];
        const double r2 = q2[i] - c * Q + 6.0 * mu * Q * Q + 2.0 * Q * Q * Q;
        const double f5 = 10.0 * (mu + Q) * (mu + Q) * q2[i] + 10.0 * (mu + Q) * q1[i] * q1[i] +
                          60.0 * mu * mu * mu * Q * Q + 60.0 * mu * mu * Q * Q * Q +
                          30.0 * mu * std::pow(Q, 4) + 6.0 * std::pow(Q, 5);
        const double r4 = q4[i] - v * Q + f5;
        s2 = std::max(s2, std::fabs(r2));
        s4 = std::max(s4, std::fabs(r4));
    }
    return {s2, s4};
}

RealField breather_eval(const BreatherParams& p, double t, const GridPtr& grid) {
    RealField B = sample(p, t, grid, B_of);
    // transcription guard: 2(g1 f - f1 g)/D must equal d/dx [2 atan(G/F)];
    // checked at 8 nodes with a 6th-order stencil on the unwrapped angle
    const PhaseCoef c = coef(p);
    const double h = 1e-2 / std::max({1.0, std::fabs(p.alpha), std::fabs(p.beta)});
    for (int probe = 0; probe < 8; ++probe) {
        const std::size_t i = (grid->n() / 16) * (2 * probe + 1);
        const double x = grid->node(i);
        double theta[7];
        for (int j = -3; j <= 3; ++j) {
            const NormParts n = norm_parts(p, c, t, x + j * h);
            theta[j + 3] = 2.0 * std::atan2(n.g, n.f);
            if (j > -3) theta[j + 3] = unwrap_near(theta[j + 3], theta[j + 2]);
        }
        const double fd = (-theta[0] + 9.0 * theta[1] - 45.0 * theta[2] + 45.0 * theta[4] -
                           9.0 * theta[5] + theta[6]) /
                          (60.0 * h);
        if (std::fabs(fd - B[i]) > 1e-7 * std::max(1.0, B.sup()))
            throw std::runtime_error("breather_eval: closed form disagrees with d/dx arctan(G/F)");
    }
    return B;
}

RealField breather_x(const BreatherParams& p, double t, const GridPtr& grid) {
    return sample(p, t, grid, Bx_of);
}

RealField breather_xx(const BreatherParams& p, double t, const GridPtr& grid) {
    return sample(p, t, grid, Bxx_of);
}

RealField breather_d2_log_d(const BreatherParams& p, double t, const GridPtr& grid) {
    return sample(p, t, grid, d2_log_d_of);
}

RealField breather_tilde(const BreatherParams& p, double t, const GridPtr& grid) {
    p.validate();
    const PhaseCoef c = coef(p);
    RealField out = RealField::zeros(grid);
    double prev = 0.0;
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const NormParts n = norm_parts(p, c, t, grid->node(i));
        double th = 2.0 * std::atan2(n.g, n.f);
        if (i > 0) {
            const double adjusted = unwrap_near(th, prev);
            if (std::fabs(adjusted - prev) > kPi)
                throw std::runtime_error("breather_tilde: branch tracking failed");
            th = adjusted;
        }
        out[i] = th;
        prev = th;
    }
    return out;
}

RealField breather_tilde_t(const BreatherParams& p, double t, const GridPtr& grid) {
    return sample(p, t, grid, Bt_tilde_of);
}

double breather_mass_closed(const BreatherParams& p) {
    p.validate();
    return 2.0 * p.beta + 2.0 * p.mu * std::atan(4.0 * p.mu * p.beta / p.delta());
}

RealField param_derivative(const BreatherParams& p, double t, const GridPtr& grid,
                           Direction which, double step_scale) {
    p.validate();
    const double base = [&] {
        switch (which) {
            case Direction::alpha: return p.alpha;
            case Direction::beta: return p.beta;
            case Direction::x1: return p.x1;
            default: return p.x2;
        }
    }();
    auto shifted = [&](double v) {
        BreatherParams q = p;
        switch (which) {
            case Direction::alpha: q.alpha = v; break;
            case Direction::beta: q.beta = v; break;
            case Direction::x1: q.x1 = v; break;
            default: q.x2 = v; break;
        }
        return q;
    };
    double h = step_scale * std::max(1.0, std::fabs(base));
    auto stencil_ok = [&](double hh) {
        for (int j : {-2, -1, 1, 2})
            if (!(shifted(base + j * hh).delta() > 0.0)) return false;
        return true;
    };
    if (!stencil_ok(h)) {
        h *= 0.5;
        if (!stencil_ok(h))
            throw std::invalid_argument("param_derivative: stencil leaves Delta > 0 region");
    }
    const PhaseCoef cm2 = coef(shifted(base - 2 * h)), cm1 = coef(shifted(base - h));
    const PhaseCoef cp1 = coef(shifted(base + h)), cp2 = coef(shifted(base + 2 * h));
    RealField out = RealField::zeros(grid);
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const double x = grid->node(i);
        const double fm2 = B_of(norm_parts(shifted(base - 2 * h), cm2, t, x));
        const double fm1 = B_of(norm_parts(shifted(base - h), cm1, t, x));
        const double fp1 = B_of(norm_parts(shifted(base + h), cp1, t, x));
        const double fp2 = B_of(norm_parts(shifted(base + 2 * h), cp2, t, x));
        out[i] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    }
    return out;
}

namespace {

// y1- and y2-partials of (f, f1, g, g1); x-derivative splits as d/dx = d/dy1 + d/dy2
struct KernelParts {
    double fx, f1x, gx, g1x;
};

KernelParts partials(const NormParts& n, const BreatherParams& p, bool wrt_y1) {
    const double b = p.beta;
    const double w = 2.0 * b * b * p.mu / p.delta();
    KernelParts k;
    if (wrt_y1) {
        k.fx = n.f1 - b * n.sh;
        k.f1x = n.f3 - b * b * n.ch;
        k.gx = n.g1 + w * n.e2;
        k.g1x = n.g3 + b * w * n.e2;
    } else {
        k.fx = b * n.sh;
        k.f1x = b * b * n.ch;
        k.gx = -w * n.e2;
        k.g1x = -b * w * n.e2;
    }
    return k;
}

RealField kernel_field(const BreatherParams& p, double t, const GridPtr& grid, bool wrt_y1) {
    p.validate();
    const PhaseCoef c = coef(p);
    RealField out = RealField::zeros(grid);
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const NormParts n = norm_parts(p, c, t, grid->node(i));
        const KernelParts k = partials(n, p, wrt_y1);
        const double num = n.g1 * n.f - n.f1 * n.g;
        const double numx = k.g1x * n.f + n.g1 * k.fx - k.f1x * n.g - n.f1 * k.gx;
        const double Dx = 2.0 * (n.f * k.fx + n.g * k.gx);
        out[i] = 2.0 * (numx * n.D - num * Dx) / (n.D * n.D);
    }
    return out;
}

}  // namespace

RealField kernel_dx1(const BreatherParams& p, double t, const GridPtr& grid) {
    return kernel_field(p, t, grid, true);
}

RealField kernel_dx2(const BreatherParams& p, double t, const GridPtr& grid) {
    return kernel_field(p, t, grid, false);
}

const char* identity_name(IdentityKind k) {
    switch (k) {
        case IdentityKind::matsuno: return "matsuno";
        case IdentityKind::integrated: return "integrated";
        case IdentityKind::time_identity: return "time_identity";
        case IdentityKind::stationary: return "stationary";
        default: return "pde";
    }
}

BreatherParams recentered(const BreatherParams& p, double t) {
    BreatherParams q = p;
    q.x2 = p.x2 - p.gamma5() * t;
    return q;
}

void require_resolved(const RealField& u, const std::string& what) {
    if (Spectral::spectral_tail(u) > 1e-11)
        throw DomainTooSmall("grid under-resolved: spectral tail of " + what +
                             " has not decayed; refine n");
}

GridPtr resolved_grid(const BreatherParams& p, double t, double half_length) {
    for (std::size_t n : {2048u, 4096u, 8192u}) {
        GridPtr g = Grid::make(half_length, n);
        RealField B = breather_eval(p, t, g);
        if (Spectral::spectral_tail(B) < 1e-11) return g;
    }
    throw DomainTooSmall("no grid up to n = 8192 resolves this breather");
}

Residual identity_residual(IdentityKind kind, const BreatherParams& p, double t,
                           const GridPtr& grid, bool negative_control) {
    p.validate();
    RealField B = breather_eval(p, t, grid);
    require_decay(B, 1e-12, "breather");
    require_resolved(B, "breather");

    const double mu = p.mu;
    const double A1 = p.a1(), A2 = p.a2();
    const double bb_aa = p.beta * p.beta - p.alpha * p.alpha;
    const double flip = negative_control ? -1.0 : 1.0;

    RealField r = RealField::zeros(grid);
    switch (kind) {
        case IdentityKind::matsuno: {
            RealField d2 = breather_d2_log_d(p, t, grid);
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] = B[i] * B[i] - d2[i] + flip * 2.0 * mu * B[i];
            break;
        }
        case IdentityKind::integrated: {
            RealField Bx = breather_x(p, t, grid);
            RealField Bxx = breather_xx(p, t, grid);
            RealField B4 = Spectral::derivative(Bxx, 2);
            RealField Bt = breather_tilde_t(p, t, grid);
            for (std::size_t i = 0; i < r.size(); ++i) {
                const double b = B[i];
                r[i] = B4[i] + flip * Bt[i] + 10.0 * (mu + b) * (mu + b) * Bxx[i] +
                       10.0 * (mu + b) * Bx[i] * Bx[i] +
                       6.0 * (10.0 * mu * mu * mu * b * b + 10.0 * mu * mu * b * b * b +
                              5.0 * mu * std::pow(b, 4) + std::pow(b, 5));
            }
            break;
        }
        case IdentityKind::time_identity: {
            RealField Bxx = breather_xx(p, t, grid);
            RealField Bt = breather_tilde_t(p, t, grid);
            for (std::size_t i = 0; i < r.size(); ++i) {
                const double b = B[i];
                r[i] = Bt[i] - A1 * b -
                       flip * A2 * (Bxx[i] + 2.0 * b * b * b + 6.0 * mu * b * b);
            }
            break;
        }
        case IdentityKind::stationary: {
            RealField Bx = breather_x(p, t, grid);
            RealField Bxx = breather_xx(p, t, grid);
            RealField B4 = Spectral::derivative(Bxx, 2);
            for (std::size_t i = 0; i < r.size(); ++i) {
                const double b = B[i];
                r[i] = B4[i] - 2.0 * bb_aa * (Bxx[i] + 6.0 * mu * b * b + 2.0 * b * b * b) +
                       flip * A1 * b + 10.0 * b * Bx[i] * Bx[i] + 10.0 * b * b * Bxx[i] +
                       6.0 * std::pow(b, 5) + 10.0 * mu * Bx[i] * Bx[i] +
                       20.0 * mu * b * Bxx[i] + 40.0 * mu * mu * b * b * b +
                       30.0 * mu * std::pow(b, 4);
            }
            break;
        }
        case IdentityKind::pde: {
            RealField Bx = breather_x(p, t, grid);
            RealField Bxx = breather_xx(p, t, grid);
            RealField B3 = Spectral::derivative(Bxx, 1);
            RealField B5 = Spectral::derivative(Bxx, 3);
            RealField Bt = breather_tilde_t(p, t, grid);
            RealField ut = Spectral::derivative(Bt, 1);
            for (std::size_t i = 0; i < r.size(); ++i) {
                const double b = B[i], bx = Bx[i];
                r[i] = flip * ut[i] + B5[i] + 10.0 * mu * mu * B3[i] + 20.0 * mu * b * B3[i] +
                       10.0 * b * b * B3[i] + 120.0 * std::pow(mu, 3) * b * bx +
                       180.0 * mu * mu * b * b * bx + 120.0 * mu * b * b * b * bx +
                       10.0 * std::pow(bx, 3) + 40.0 * mu * bx * Bxx[i] + 40.0 * b * bx * Bxx[i] +
                       30.0 * std::pow(b, 4) * bx;
            }
            break;
        }
    }
    return {r.sup(), std::sqrt(Spectral::inner_l2(r, r))};
}

}  // namespace g5::exact
