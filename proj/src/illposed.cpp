#include "g5/illposed.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "g5/spectral.hpp"

namespace g5::illposed {
namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

double glue(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double e1 = std::exp(-1.0 / t);
    const double e2 = std::exp(-1.0 / (1.0 - t));
    return e1 / (e1 + e2);
}

std::size_t next_pow2(double x) {
    std::size_t n = 16;
    while (static_cast<double>(n) < x) n <<= 1;
    return n;
}

}  // namespace

void IllposedParams::validate() const {
    if (!(N >= 4.0)) throw std::invalid_argument("IllposedParams: N must be >= 4");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("IllposedParams: delta must be in (0,1)");
    if (!(s > 0.0)) throw std::invalid_argument("IllposedParams: s must be > 0");
    if (!(delta > std::max(0.0, 2.0 - 2.0 * s)))
        throw std::invalid_argument("IllposedParams: requires delta > max(0, 2-2s)");
    if (!(eps > 0.0) || eps > 0.1)
        throw std::invalid_argument("IllposedParams: eps must be in (0, 0.1]");
    gardner.validate();
}

double bump(double x) { return 1.0 - glue(std::fabs(x) - 1.0); }

double bump_tilde(double x) { return bump(0.5 * x); }

double phase(const IllposedParams& p, double t) {
    const double ml = p.gardner.mu_eff();
    return (std::pow(p.N, 5) - 10.0 * ml * ml * std::pow(p.N, 3)) * t;
}

GridPtr recommended_grid(const IllposedParams& p) {
    p.validate();
    const double L = 4.2 * p.width();
    const double dx_max = M_PI / (8.0 * p.N);
    const std::size_t n = next_pow2(2.0 * L / dx_max);
    if (n > kMaxGridPoints)
        throw std::invalid_argument("illposed: grid would exceed 2^24 points (resource guard)");
    return Grid::make(L, n);
}

TwinInitials build_initials(const IllposedParams& p, const GridPtr& grid) {
    p.validate();
    const double W = p.width();
    if (grid->dx() > M_PI / (8.0 * p.N))
        throw std::invalid_argument("build_initials: grid does not resolve the carrier");
    if (grid->half_length() < 4.0 * W)
        throw std::invalid_argument("build_initials: domain does not contain supp phi_tilde_N");
    const double low_amp = p.eps * std::pow(p.N, -3);
    const double high_amp = std::pow(p.N, -(4.0 + p.delta) / 2.0 - p.s);
    RealField up = RealField::zeros(grid), um = RealField::zeros(grid);
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const double x = grid->node(i);
        const double low = low_amp * bump_tilde(x / W);
        const double high = high_amp * bump(x / W) * std::cos(p.N * x);
        up[i] = low + high;
        um[i] = -low + high;
    }
    return {std::move(up), std::move(um)};
}

double phi_l2() {
    // phi is supported on [-2,2]; 2^15 samples put the quadrature error at rounding
    const std::size_t n = 1 << 15;
    const double L = 4.0, dx = 2.0 * L / n;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = bump(-L + dx * i);
        acc += v * v;
    }
    return std::sqrt(acc * dx);
}

double scaled_norm_modulation(double N, double delta, double s, double gamma) {
    (void)gamma;  // the +-N bumps never overlap at double precision, so the
                  // gamma cross term vanishes; the direct route below keeps it
    const std::size_t n0 = 1 << 17;
    const double L0 = 8.0;
    GridPtr g0 = Grid::make(L0, n0);
    RealField ph = RealField::zeros(g0);
    for (std::size_t i = 0; i < n0; ++i) ph[i] = bump(g0->node(i));
    auto& sp = Spectral::get(n0);
    auto hat = sp.forward(ph);
    const double W = std::pow(N, 4.0 + delta);
    const double dk = M_PI / L0;
    const double dx0 = g0->dx();
    const auto& k = g0->wavenumbers();
    double acc = 0.0;
    for (std::size_t j = 0; j < sp.nbins(); ++j) {
        const double kj = (j + 1 < sp.nbins()) ? k[j] : g0->kmax();
        const double weight = (j == 0 || j + 1 == sp.nbins()) ? 1.0 : 2.0;
        const double mag2 = std::norm(hat[j] * dx0);  // |phi_hat(kappa)|^2
        const double kplus = N + kj / W;
        const double kminus = -N + kj / W;
        const double wsum = std::pow(1.0 + kplus * kplus, s) + std::pow(1.0 + kminus * kminus, s);
        acc += weight * 0.25 * wsum * mag2;
    }
    const double norm2 = acc * dk * W / (2.0 * M_PI);
    return std::sqrt(norm2) * std::pow(N, -(4.0 + delta) / 2.0 - s);
}

double scaled_norm_direct(double N, double delta, double s, double gamma) {
    const double W = std::pow(N, 4.0 + delta);
    const double L = 2.2 * W;
    const double dx_max = M_PI / (8.0 * N);
    const std::size_t n = next_pow2(2.0 * L / dx_max);
    if (n > kMaxGridPoints)
        throw std::invalid_argument("norm_scan: grid would exceed 2^24 points (resource guard)");
    GridPtr g = Grid::make(L, n);
    RealField u = RealField::zeros(g);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g->node(i);
        u[i] = bump(x / W) * std::sin(N * x + gamma);
    }
    return Spectral::sobolev_norm(u, s) * std::pow(N, -(4.0 + delta) / 2.0 - s);
}

NormScanResult norm_scan(double delta, double s, const std::vector<double>& Ns, double gamma) {
    if (Ns.empty()) throw std::invalid_argument("norm_scan: need at least one N");
    NormScanResult res;
    res.analytic_limit = phi_l2() / std::sqrt(2.0);
    for (double N : Ns) {
        const double v = scaled_norm_modulation(N, delta, s, gamma);
        res.rows.push_back({N, v, res.analytic_limit,
                            std::fabs(v - res.analytic_limit) / res.analytic_limit});
    }
    if (res.rows.size() >= 2) {
        // scaled(N) ~ limit * (1 + c/N^2): eliminate c with the two largest N
        const auto& r1 = res.rows[res.rows.size() - 2];
        const auto& r2 = res.rows.back();
        const double w1 = 1.0 / (r1.N * r1.N), w2 = 1.0 / (r2.N * r2.N);
        res.extrapolated = (r2.scaled_norm * w1 - r1.scaled_norm * w2) / (w1 - w2);
    } else {
        res.extrapolated = res.rows.back().scaled_norm;
    }
    return res;
}

double predicted_rate(const IllposedParams& p) {
    const double ml = p.gardner.mu_eff();
    return 20.0 * ml * p.eps * (1.0 - 6.0 * ml * ml / (p.N * p.N));
}

TwinResult twin_divergence(const IllposedParams& p, const GridPtr& grid, double dt, double t_end,
                           std::size_t diag_stride, bool ablate_high_low) {
    p.validate();
    const auto t0 = std::chrono::steady_clock::now();
    TwinInitials init = build_initials(p, grid);

    const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / std::fabs(dt)));
    std::vector<std::size_t> diag_steps;
    for (std::size_t i = 0; i <= steps; ++i)
        if (i % diag_stride == 0 || i == steps) diag_steps.push_back(i);

    const std::size_t nb = grid->n() / 2 + 1;
    std::vector<std::vector<cplx>> snap_plus(diag_steps.size()), snap_minus(diag_steps.size());
    double mass_plus0 = functionals::mass(init.u_plus);
    double mass_minus0 = functionals::mass(init.u_minus);

    auto evolve = [&](const RealField& u0, std::vector<std::vector<cplx>>& snaps) {
        auto& sp = Spectral::get(grid->n());
        dynamics::Stepper st(grid, p.gardner, dt, dynamics::Scheme::etdrk4, true,
                             ablate_high_low);
        auto hat = sp.forward(u0);
        std::size_t slot = 0;
        for (std::size_t i = 0; i <= steps; ++i) {
            if (slot < diag_steps.size() && diag_steps[slot] == i) snaps[slot++] = hat;
            if (i < steps) st.step(hat);
        }
    };

    // the two runs are independent; evolve them on separate threads
    std::thread tp([&] { evolve(init.u_plus, snap_plus); });
    evolve(init.u_minus, snap_minus);
    tp.join();

    TwinResult res;
    res.sigma_pred = predicted_rate(p);
    auto& sp = Spectral::get(grid->n());
    std::vector<cplx> diff(nb);
    for (std::size_t m = 0; m < diag_steps.size(); ++m) {
        for (std::size_t j = 0; j < nb; ++j) diff[j] = snap_plus[m][j] - snap_minus[m][j];
        RealField d = sp.inverse(grid, diff);
        if (!d.all_finite()) throw std::runtime_error("twin_divergence: blow-up in a twin run");
        res.times.push_back(dt * static_cast<double>(diag_steps[m]));
        res.distance.push_back(Spectral::sobolev_norm(d, p.s));
    }
    res.d0 = res.distance.front();

    // the low-part difference (pedestal d0) and the carrier-band signal are
    // orthogonal in k-space, so the |sin| model applies to the high band
    // d_high = sqrt(d^2 - d0^2)
    auto fit_model = [&](double rate) {
        double num = 0.0, den = 0.0;
        auto high = [&](std::size_t m) {
            const double excess = res.distance[m] * res.distance[m] - res.d0 * res.d0;
            return excess > 0.0 ? std::sqrt(excess) : 0.0;
        };
        for (std::size_t m = 1; m < res.times.size(); ++m) {
            const double mdl = std::fabs(std::sin(rate * res.times[m]));
            num += high(m) * mdl;
            den += mdl * mdl;
        }
        TwinFit f;
        f.amplitude = den > 0.0 ? num / den : 0.0;
        double r2 = 0.0, d2 = 0.0;
        for (std::size_t m = 1; m < res.times.size(); ++m) {
            const double mdl = f.amplitude * std::fabs(std::sin(rate * res.times[m]));
            r2 += (high(m) - mdl) * (high(m) - mdl);
            d2 += high(m) * high(m);
        }
        f.rel_residual = d2 > 0.0 ? std::sqrt(r2 / d2) : 0.0;
        return f;
    };
    res.fit = fit_model(res.sigma_pred);
    res.fit_unit = fit_model(1.0);

    RealField fp = sp.inverse(grid, snap_plus.back());
    RealField fm = sp.inverse(grid, snap_minus.back());
    res.mass_drift_plus = std::fabs(functionals::mass(fp) - mass_plus0) / mass_plus0;
    res.mass_drift_minus = std::fabs(functionals::mass(fm) - mass_minus0) / mass_minus0;
    res.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace g5::illposed
