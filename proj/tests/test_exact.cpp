#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g5/exact.hpp"
#include "g5/spectral.hpp"

using namespace g5;
using namespace g5::exact;

namespace {

GridPtr lattice_grid() { return Grid::make(80.0, 8192); }

// mu at {25, 50, 75}% of the admissible range sqrt(alpha^2+beta^2)/2
double mu_frac(double a, double b, double frac) {
    return frac * 0.5 * std::sqrt(a * a + b * b);
}

const double kAB[] = {0.5, 1.0, 2.0};
const double kFrac[] = {0.25, 0.5, 0.75};

}  // namespace

TEST_CASE("parameter validation") {
    SolitonParams s1{-1.0, 1.0}, s2{0.5, -1.0}, s3{0.5, 1.0};
    CHECK_THROWS_AS(s1.validate(), std::invalid_argument);
    CHECK_THROWS_AS(s2.validate(), std::invalid_argument);
    CHECK_NOTHROW(s3.validate());

    BreatherParams bad{1.0, 1.0, 0.8, 0.0, 0.0};  // Delta = 2 - 2.56 < 0
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    BreatherParams good{1.0, 1.0, 0.3, 0.0, 0.0};
    CHECK_NOTHROW(good.validate());
    CHECK(good.stability_regime());
    CHECK(good.delta() == doctest::Approx(1.64));
    CHECK(good.a1() == doctest::Approx(4.0));
    CHECK(good.a2() == doctest::Approx(2.0 * (1.0 - 1.0 - 0.45)));
}

TEST_CASE("soliton profile values and peak motion") {
    auto g = Grid::make(60.0, 2048);
    {
        // mu -> 0+ limit: peak tends to 1 for c = 1
        SolitonParams p{1e-8, 1.0, 0.0};
        RealField q = soliton_eval(p, 0.0, g);
        double peak = q.sup();
        CHECK(peak == doctest::Approx(1.0).epsilon(1e-6));
    }
    {
        SolitonParams p{0.5, 1.0, 0.0};
        CHECK(p.speed() == doctest::Approx(3.5));
        RealField q = soliton_eval(p, 0.0, g);
        // value at x = 0: 1/(1 + sqrt(2))
        std::size_t i0 = g->n() / 2;
        CHECK(g->node(i0) == doctest::Approx(0.0));
        CHECK(q[i0] == doctest::Approx(0.41421356237309515).epsilon(1e-14));
        // at t = 1 the peak sits at v*t - x1 = 3.5
        RealField q1 = soliton_eval(p, 1.0, g);
        std::size_t imax = 0;
        for (std::size_t i = 1; i < g->n(); ++i)
            if (q1[i] > q1[imax]) imax = i;
        CHECK(g->node(imax) == doctest::Approx(3.5).epsilon(1e-2));
    }
}

TEST_CASE("soliton ODE residuals across the (mu, c) lattice") {
    auto g = Grid::make(100.0, 4096);
    for (double mu : {0.1, 0.5, 1.0})
        for (double c : {0.1, 0.5, 1.0}) {
            SolitonParams p{mu, c, 0.0};
            auto r = soliton_residuals(p, g);
            CAPTURE(mu);
            CAPTURE(c);
            CHECK(r.ode2_sup < 1e-9);
            CHECK(r.ode4_sup < 1e-8);
        }
    // refinement does not worsen an exact identity
    SolitonParams p{0.5, 1.0, 0.0};
    auto ra = soliton_residuals(p, Grid::make(100.0, 2048));
    auto rb = soliton_residuals(p, Grid::make(100.0, 4096));
    CHECK(rb.ode2_sup < std::max(ra.ode2_sup, 1e-11) * 2.0);
}

TEST_CASE("FG parts: printed point values and derivative-chain consistency") {
    BreatherParams p{1.0, 1.0, 0.3, 0.0, 0.0};
    // at y1 = y2 = 0
    FGParts P = breather_fg(p, 0.0, 0.0);
    CHECK(P.f == doctest::Approx(0.6687054217754604).epsilon(1e-14));
    CHECK(P.g == doctest::Approx(-0.3658536585365853).epsilon(1e-14));
    CHECK(P.f1 == doctest::Approx(0.3312945782245396).epsilon(1e-12));
    CHECK(P.D > 0.0);

    // f1, f3, f4 agree with centered differences of f in x (guards the
    // transcription of the derivative chain)
    for (double x : {-3.7, -1.0, 0.4, 2.9}) {
        const double h = 1e-5;
        auto at = [&](double xx) { return breather_fg(p, 0.2, xx); };
        const FGParts c = at(x), pl = at(x + h), mi = at(x - h);
        CHECK(c.f1 == doctest::Approx((pl.f - mi.f) / (2 * h)).epsilon(1e-8));
        CHECK(c.f3 == doctest::Approx((pl.f1 - mi.f1) / (2 * h)).epsilon(1e-8));
        CHECK(c.f4 == doctest::Approx((pl.f3 - mi.f3) / (2 * h)).epsilon(1e-8));
        CHECK(c.g1 == doctest::Approx((pl.g - mi.g) / (2 * h)).epsilon(1e-8));
        CHECK(c.g3 == doctest::Approx((pl.g1 - mi.g1) / (2 * h)).epsilon(1e-8));
        CHECK(c.g4 == doctest::Approx((pl.g3 - mi.g3) / (2 * h)).epsilon(1e-8));
        // t-derivatives
        const FGParts tp = breather_fg(p, 0.2 + h, x), tm = breather_fg(p, 0.2 - h, x);
        CHECK(c.f2 == doctest::Approx((tp.f - tm.f) / (2 * h)).epsilon(1e-7));
        CHECK(c.g2 == doctest::Approx((tp.g - tm.g) / (2 * h)).epsilon(1e-7));
    }
}

TEST_CASE("breather field: closed derivatives match spectral differentiation") {
    auto g = lattice_grid();
    BreatherParams p{1.0, 1.0, 0.3, 0.0, 0.0};
    RealField B = breather_eval(p, 0.0, g);
    CHECK(B.sup() == doctest::Approx(2.152366).epsilon(1e-4));
    CHECK(B.boundary_level() < 1e-12 * B.sup());

    RealField bx_c = breather_x(p, 0.0, g);
    RealField bx_s = Spectral::derivative(B, 1);
    RealField bxx_c = breather_xx(p, 0.0, g);
    RealField bxx_s = Spectral::derivative(B, 2);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < g->n(); ++i) {
        e1 = std::max(e1, std::fabs(bx_c[i] - bx_s[i]));
        e2 = std::max(e2, std::fabs(bxx_c[i] - bxx_s[i]));
    }
    CHECK(e1 < 1e-11);
    CHECK(e2 < 1e-10);
}

TEST_CASE("antiderivative: dx B-tilde = B and B-tilde_t matches a time FD") {
    auto g = lattice_grid();
    BreatherParams p{1.0, 1.0, 0.3, 0.0, 0.0};
    RealField B = breather_eval(p, 0.3, g);
    RealField T = breather_tilde(p, 0.3, g);

    // B-tilde carries the offset int B dx across the box; subtracting a ramp
    // makes it periodic before differentiating
    const double L = g->half_length();
    double c_inf = 0.0;
    for (std::size_t i = 0; i < g->n(); ++i) c_inf += B[i];
    c_inf *= g->dx();
    RealField per = T;
    for (std::size_t i = 0; i < g->n(); ++i)
        per[i] -= c_inf * (g->node(i) + L) / (2.0 * L);
    RealField dT = Spectral::derivative(per, 1);
    double sup = 0.0;
    for (std::size_t i = 0; i < g->n(); ++i)
        sup = std::max(sup, std::fabs(dT[i] + c_inf / (2.0 * L) - B[i]));
    CHECK(sup < 1e-8);

    // flat at both ends (arctan of a cosh-dominated ratio)
    CHECK(std::fabs(T[0] - T[1]) < 1e-10);
    CHECK(std::fabs(T[g->n() - 1] - T[g->n() - 2]) < 1e-10);

    const double h = 1e-4;
    RealField Tp = breather_tilde(p, 0.3 + h, g);
    RealField Tm = breather_tilde(p, 0.3 - h, g);
    RealField Tt = breather_tilde_t(p, 0.3, g);
    double supt = 0.0;
    for (std::size_t i = 0; i < g->n(); ++i)
        supt = std::max(supt, std::fabs((Tp[i] - Tm[i]) / (2.0 * h) - Tt[i]));
    CHECK(supt < 1e-6);
}

TEST_CASE("breather mass: closed form vs quadrature across the lattice") {
    for (double a : kAB)
        for (double b : kAB)
            for (double fr : kFrac) {
                BreatherParams p{a, b, mu_frac(a, b, fr), 0.0, 0.0};
                auto g = lattice_grid();
                RealField B = breather_eval(p, 0.0, g);
                double quad = 0.5 * Spectral::inner_l2(B, B);
                double closed = breather_mass_closed(p);
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(fr);
                CHECK(std::fabs(quad - closed) / closed < 1e-8);
            }
    // mu -> 0+ limit: mass tends to 2 beta
    BreatherParams tiny{1.0, 1.5, 1e-10, 0.0, 0.0};
    CHECK(breather_mass_closed(tiny) == doctest::Approx(3.0).epsilon(1e-9));
    // frozen value at the reference point
    BreatherParams ref{1.0, 1.0, 0.3, 0.0, 0.0};
    CHECK(breather_mass_closed(ref) == doctest::Approx(2.3790143806033814).epsilon(1e-14));
    // monotone in beta at fixed (alpha, mu)
    double prev = 0.0;
    for (double b = 0.5; b <= 2.0; b += 0.25) {
        const double m = breather_mass_closed(BreatherParams{1.0, b, 0.3, 0.0, 0.0});
        CHECK(m > prev);
        prev = m;
    }
}

TEST_CASE("parameter derivatives: chain rule, closed kernels, Richardson stability") {
    auto g = lattice_grid();
    BreatherParams p{1.0, 1.0, 0.3, 0.0, 0.0};

    RealField b1 = param_derivative(p, 0.0, g, Direction::x1);
    RealField b2 = param_derivative(p, 0.0, g, Direction::x2);
    RealField bx = Spectral::derivative(breather_eval(p, 0.0, g), 1);
    double sup = 0.0;
    for (std::size_t i = 0; i < g->n(); ++i)
        sup = std::max(sup, std::fabs(b1[i] + b2[i] - bx[i]));
    CHECK(sup < 1e-6);  // x1 and x2 each shift one phase, x shifts both

    // closed-form kernel fields agree with the FD route
    RealField c1 = kernel_dx1(p, 0.0, g);
    RealField c2 = kernel_dx2(p, 0.0, g);
    double s1 = 0.0, s2 = 0.0, schain = 0.0;
    for (std::size_t i = 0; i < g->n(); ++i) {
        s1 = std::max(s1, std::fabs(c1[i] - b1[i]));
        s2 = std::max(s2, std::fabs(c2[i] - b2[i]));
        schain = std::max(schain, std::fabs(c1[i] + c2[i] - bx[i]));
    }
    CHECK(s1 < 1e-9);
    CHECK(s2 < 1e-9);
    CHECK(schain < 1e-11);

    // step halving changes the alpha derivative below 1e-8 (Richardson check)
    RealField da = param_derivative(p, 0.0, g, Direction::alpha, 1e-3);
    RealField da2 = param_derivative(p, 0.0, g, Direction::alpha, 5e-4);
    double dd = 0.0;
    for (std::size_t i = 0; i < g->n(); ++i)
        dd = std::max(dd, std::fabs(da[i] - da2[i]));
    CHECK(dd < 1e-8);
    CHECK(da.all_finite());
    CHECK(da.boundary_level() < 1e-10 * da.sup());

    // stencil that would leave the Delta > 0 region must fail after one shrink
    BreatherParams edge{1.0, 1.0, 0.705, 0.0, 0.0};
    CHECK_THROWS_AS(param_derivative(edge, 0.0, g, Direction::alpha, 0.05),
                    std::invalid_argument);
}

TEST_CASE("translation covariance") {
    auto g = lattice_grid();
    BreatherParams p{1.0, 1.0, 0.3, 0.0, 0.0};
    const double shift = 8.0 * g->dx();  // integer node shift, no interpolation error
    BreatherParams q{1.0, 1.0, 0.3, shift, shift};
    RealField B0 = breather_eval(p, 0.2, g);
    RealField Bs = breather_eval(q, 0.2, g);
    double sup = 0.0;
    for (std::size_t i = 8; i < g->n(); ++i)
        sup = std::max(sup, std::fabs(Bs[i - 8] - B0[i]));
    CHECK(sup < 1e-12);
}

TEST_CASE("all five identities hold on the full parameter lattice") {
    auto g = lattice_grid();
    const IdentityKind kinds[] = {IdentityKind::matsuno, IdentityKind::integrated,
                                  IdentityKind::time_identity, IdentityKind::stationary,
                                  IdentityKind::pde};
    for (double a : kAB)
        for (double b : kAB)
            for (double fr : kFrac)
                for (double t : {0.0, 0.5}) {
                    BreatherParams p0{a, b, mu_frac(a, b, fr), 0.0, 0.0};
                    BreatherParams p = recentered(p0, t);
                    for (auto k : kinds) {
                        auto r = identity_residual(k, p, t, g);
                        CAPTURE(a);
                        CAPTURE(b);
                        CAPTURE(fr);
                        CAPTURE(t);
                        CAPTURE(identity_name(k));
                        CHECK(r.sup < 1e-6);
                        CHECK(r.l2 < 1e-6 * std::sqrt(2.0 * g->half_length()));
                    }
                }
}

TEST_CASE("negative controls: sign flips blow every identity past 1e-2") {
    auto g = lattice_grid();
    BreatherParams p{1.0, 1.0, 0.3, 0.0, 0.0};
    for (auto k : {IdentityKind::matsuno, IdentityKind::integrated, IdentityKind::time_identity,
                   IdentityKind::stationary, IdentityKind::pde}) {
        auto r = identity_residual(k, p, 0.0, g, /*negative_control=*/true);
        CAPTURE(identity_name(k));
        CHECK(r.sup > 1e-2);
    }
}

TEST_CASE("stationary identity survives time-dependent shifts") {
    // modified breather with continuous x1(t), x2(t) still satisfies the
    // stationary equation at each frozen t
    auto g = lattice_grid();
    for (double t : {0.0, 0.37, 1.0}) {
        BreatherParams p{1.0, 1.0, 0.3, 0.4 * std::sin(t), -0.2 * t};
        auto r = identity_residual(IdentityKind::stationary, p, t, g);
        CHECK(r.sup < 1e-7);
    }
}

TEST_CASE("domain and resolution guards fire") {
    BreatherParams p{1.0, 1.0, 0.3, 0.0, 0.0};
    auto small = Grid::make(8.0, 256);
    CHECK_THROWS_AS(identity_residual(IdentityKind::matsuno, p, 0.0, small), DomainTooSmall);
    // far-displaced breather leaves the box
    BreatherParams far{1.0, 1.0, 0.3, 0.0, 70.0};
    CHECK_THROWS_AS(identity_residual(IdentityKind::matsuno, far, 0.0, lattice_grid()),
                    DomainTooSmall);
}
