#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g5/illposed.hpp"
#include "g5/spectral.hpp"

using namespace g5;
using namespace g5::illposed;

namespace {

IllposedParams desk_params() {
    IllposedParams p;
    p.N = 4.0;
    p.delta = 0.5;
    p.s = 2.0;
    p.eps = 0.01;
    // mu = 0.35 keeps the carrier frequency integrable and the competing
    // high-low channels well below the w w_3x coupling
    p.gardner = GardnerParams{0.35, 1.0};
    return p;
}

}  // namespace

TEST_CASE("bump functions: supports, partition property, monotone transition") {
    CHECK(bump(0.5) == 1.0);
    CHECK(bump(-0.99) == 1.0);
    CHECK(bump(2.5) == 0.0);
    CHECK(bump(-3.0) == 0.0);
    CHECK(bump(1.5) > 0.0);
    CHECK(bump(1.5) < 1.0);
    // phi_tilde * phi == phi on a fine sweep
    for (int i = 0; i <= 200; ++i) {
        const double x = -3.0 + 6.0 * i / 200.0;
        CHECK(std::fabs(bump_tilde(x) * bump(x) - bump(x)) < 1e-15);
    }
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 0.05) {
        CHECK(bump(x) <= prev + 1e-15);
        prev = bump(x);
    }
}

TEST_CASE("parameter validation") {
    IllposedParams p = desk_params();
    CHECK_NOTHROW(p.validate());
    p.delta = 1.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = desk_params();
    p.s = 0.4;  // delta = 0.5 < 2 - 2s = 1.2
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = desk_params();
    p.N = 2.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = desk_params();
    p.eps = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("phase is the linear dispersion at the carrier") {
    IllposedParams p = desk_params();
    p.gardner = GardnerParams{0.1, 1.0};
    CHECK(phase(p, 0.0) == 0.0);
    CHECK(phase(p, 1.0) == doctest::Approx(1017.6));  // 4^5 - 10*0.01*4^3
    CHECK(phase(p, 2.0) == doctest::Approx(2.0 * phase(p, 1.0)));
}

TEST_CASE("twin initial data") {
    IllposedParams p = desk_params();
    GridPtr grid = recommended_grid(p);
    auto init = build_initials(p, grid);

    // the difference at t=0 is the low part alone: 2 eps N^-3 phi_tilde_N
    const double W = p.width();
    double sup = 0.0;
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const double expect = 2.0 * p.eps * std::pow(p.N, -3) * bump_tilde(grid->node(i) / W);
        sup = std::max(sup, std::fabs(init.u_plus[i] - init.u_minus[i] - expect));
    }
    CHECK(sup < 1e-15);

    // L2 of the difference matches the dilated-bump scaling
    RealField diff = init.u_plus;
    for (std::size_t i = 0; i < grid->n(); ++i) diff[i] -= init.u_minus[i];
    const double l2 = Spectral::sobolev_norm(diff, 0.0);
    double phit = 0.0;  // ||phi_tilde||_L2 by quadrature
    {
        const std::size_t m = 1 << 14;
        const double L0 = 8.0, dx = 2.0 * L0 / m;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = bump_tilde(-L0 + dx * i);
            phit += v * v * dx;
        }
        phit = std::sqrt(phit);
    }
    const double expect = 2.0 * p.eps * std::pow(p.N, -3) * std::sqrt(W) * phit;
    CHECK(l2 == doctest::Approx(expect).epsilon(1e-6));

    // H^s norm of one datum is O(eps) + O(1)
    CHECK(Spectral::sobolev_norm(init.u_plus, p.s) < 5.0);

    // under-resolved carrier and short domain refuse
    auto coarse = Grid::make(grid->half_length(), 4096);
    CHECK_THROWS_AS(build_initials(p, coarse), std::invalid_argument);
    auto narrow = Grid::make(grid->half_length() / 8.0, grid->n() / 8);
    CHECK_THROWS_AS(build_initials(p, narrow), std::invalid_argument);
}

TEST_CASE("norm scan: modulation route, direct-grid agreement, gamma independence") {
    const double target = phi_l2() / std::sqrt(2.0);
    auto res = norm_scan(0.5, 2.0, {8.0, 16.0, 32.0}, 0.0);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.analytic_limit == doctest::Approx(target));

    // monotone approach to the limit
    CHECK(res.rows[0].rel_err > res.rows[1].rel_err);
    CHECK(res.rows[1].rel_err > res.rows[2].rel_err);
    // within 2% at N=32 and the Richardson extrapolation lands closer still
    CHECK(res.rows[2].rel_err < 0.02);
    CHECK(std::fabs(res.extrapolated - target) / target < res.rows[2].rel_err);

    // the modulation evaluation equals a genuine carrier-resolving quadrature
    for (double N : {5.0, 6.0}) {
        const double direct = scaled_norm_direct(N, 0.5, 2.0, 0.0);
        const double mod = scaled_norm_modulation(N, 0.5, 2.0, 0.0);
        CHECK(std::fabs(direct - mod) / direct < 1e-6);
    }
    // gamma independence on the direct route
    const double g0 = scaled_norm_direct(6.0, 0.5, 2.0, 0.0);
    const double g1 = scaled_norm_direct(6.0, 0.5, 2.0, 0.7);
    const double g2 = scaled_norm_direct(6.0, 0.5, 2.0, 2.1);
    CHECK(std::fabs(g1 - g0) / g0 < 0.01);
    CHECK(std::fabs(g2 - g0) / g0 < 0.01);

    // the resource guard refuses carrier-resolving grids past 2^24 points
    CHECK_THROWS_AS(scaled_norm_direct(32.0, 0.5, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("predicted rate includes the first-order coupling correction") {
    IllposedParams p = desk_params();
    const double ml = p.gardner.mu_eff();
    CHECK(predicted_rate(p) ==
          doctest::Approx(20.0 * ml * p.eps * (1.0 - 6.0 * ml * ml / (p.N * p.N))));
}

TEST_CASE("twin divergence follows the derived |sin(sigma t)| law") {
    IllposedParams p = desk_params();
    GridPtr grid = recommended_grid(p);
    auto r = twin_divergence(p, grid, 1e-3, 0.2, 10, false);
    const double ns = scaled_norm_modulation(p.N, p.delta, p.s, 0.0);
    CAPTURE(r.fit.amplitude);
    CAPTURE(r.fit.rel_residual);
    CHECK(r.fit.rel_residual < 0.1);
    CHECK(std::fabs(r.fit.amplitude / (2.0 * ns) - 1.0) < 0.2);
    // d(0) is the low-part difference, small next to the fitted amplitude
    CHECK(r.d0 < 0.05 * r.fit.amplitude);
    // each twin conserves mass at the integrator's accuracy for this dt
    CHECK(r.mass_drift_plus < 1e-5);
    CHECK(r.mass_drift_minus < 1e-5);

    // ablating the w w_3x coupling collapses the separation
    auto abl = twin_divergence(p, grid, 1e-3, 0.2, 10, true);
    CHECK(r.fit.amplitude > 5.0 * abl.fit.amplitude);
}

TEST_CASE("distance series is symmetric under time reversal") {
    IllposedParams p = desk_params();
    GridPtr grid = recommended_grid(p);
    auto fwd = twin_divergence(p, grid, 1e-3, 0.1, 25, false);
    auto bwd = twin_divergence(p, grid, -1e-3, 0.1, 25, false);
    REQUIRE(fwd.distance.size() == bwd.distance.size());
    for (std::size_t i = 0; i < fwd.distance.size(); ++i)
        CHECK(std::fabs(fwd.distance[i] - bwd.distance[i]) <
              1e-6 * std::max(1.0, fwd.distance[i]));
}

TEST_CASE("low part drifts less at higher carrier frequency") {
    double drift[2];
    int k = 0;
    for (double N : {4.0, 5.0}) {
        IllposedParams p = desk_params();
        p.N = N;
        GridPtr grid = recommended_grid(p);
        auto init = build_initials(p, grid);
        RealField low = init.u_plus;
        for (std::size_t i = 0; i < grid->n(); ++i)
            low[i] = 0.5 * (init.u_plus[i] - init.u_minus[i]);
        auto& sp = Spectral::get(grid->n());
        auto hat = sp.forward(low);
        dynamics::Stepper st(grid, p.gardner, 1e-3);
        for (int i = 0; i < 100; ++i) st.step(hat);
        RealField evolved = sp.inverse(grid, hat);
        double acc = 0.0;
        for (std::size_t i = 0; i < grid->n(); ++i)
            acc += (evolved[i] - low[i]) * (evolved[i] - low[i]);
        drift[k++] = std::sqrt(acc * grid->dx());
    }
    CHECK(drift[1] < drift[0]);
}
