#include "g5/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "g5/kernels.hpp"

namespace g5::dynamics {
namespace {

constexpr int kContourPoints = 32;

cplx linear_symbol(double k, const GardnerParams& gp) {
    const double ml = gp.mu_eff();
    return cplx(0.0, -std::pow(k, 5) + 10.0 * ml * ml * std::pow(k, 3));
}

struct NlCoef {
    double ww3, w1w2, w2w1, ww1, w3w1;
};

NlCoef nl_coef(const GardnerParams& gp, bool ablate) {
    const double ml = gp.mu_eff();
    return {ablate ? 0.0 : 20.0 * ml, 40.0 * ml, 180.0 * ml * ml, 120.0 * ml * ml * ml,
            120.0 * ml};
}

}  // namespace

RealField rhs_general(const RealField& w, const GardnerParams& gp, RhsOptions opts) {
    gp.validate();
    auto& sp = Spectral::get(w.grid().n());
    auto hat = sp.forward(w);
    const std::size_t m = sp.fine_n();
    std::vector<double> fw(m), fw1(m), fw2(m), fw3(m), fnl(m);
    const auto& k = w.grid().wavenumbers();
    const std::size_t nb = sp.nbins();
    auto derived = [&](int order) {
        std::vector<cplx> h(nb);
        for (std::size_t j = 0; j < nb; ++j) {
            const double kj = (j < nb - 1) ? k[j] : w.grid().kmax();
            cplx mult;
            const double pw = std::pow(kj, order);
            switch (order % 4) {
                case 0: mult = cplx(pw, 0); break;
                case 1: mult = cplx(0, pw); break;
                case 2: mult = cplx(-pw, 0); break;
                default: mult = cplx(0, -pw); break;
            }
            h[j] = hat[j] * mult;
        }
        if (order % 2 == 1) h[nb - 1] = 0.0;
        return h;
    };
    sp.to_fine(hat, fw);
    auto h1 = derived(1);
    sp.to_fine(h1, fw1);
    auto h2 = derived(2);
    sp.to_fine(h2, fw2);
    auto h3 = derived(3);
    sp.to_fine(h3, fw3);
    const NlCoef c = nl_coef(gp, opts.ablate_high_low);
    kern::ops().gardner_nl(fnl.data(), fw.data(), fw1.data(), fw2.data(), fw3.data(), c.ww3,
                           c.w1w2, c.w2w1, c.ww1, c.w3w1, m);
    std::vector<cplx> out_hat(nb);
    sp.from_fine(fnl, out_hat);
    if (opts.include_linear) {
        for (std::size_t j = 0; j < nb; ++j) {
            const double kj = (j < nb - 1) ? k[j] : w.grid().kmax();
            cplx ell = linear_symbol(kj, gp);
            if (j == nb - 1) ell = 0.0;
            out_hat[j] += ell * hat[j];
        }
    }
    return sp.inverse(w.grid_ptr(), out_hat);
}

RealField rhs_original(const RealField& u, const GardnerParams& gp, RhsOptions opts) {
    GardnerParams one{gp.mu, 1.0};
    return rhs_general(u, one, opts);
}

double rescaled_breather_residual(const exact::BreatherParams& bp, double lambda, double t,
                                  const GridPtr& grid) {
    bp.validate();
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("rescaled_breather_residual: lambda must be in (0,1]");
    // nodes of the scaled grid are exactly lambda times the nodes of `grid`
    GridPtr scaled = Grid::make(lambda * grid->half_length(), grid->n());
    const double ts = std::pow(lambda, 5) * t;
    RealField B = exact::breather_eval(bp, ts, scaled);
    require_decay(B, 1e-12, "rescaled breather");
    RealField Bx = exact::breather_x(bp, ts, scaled);
    RealField Bxx = exact::breather_xx(bp, ts, scaled);
    RealField Btt = exact::breather_tilde_t(bp, ts, scaled);

    const std::size_t n = grid->n();
    RealField w = RealField::zeros(grid), w1 = RealField::zeros(grid), w2 = RealField::zeros(grid);
    RealField h = RealField::zeros(grid);
    const double l2s = lambda * lambda;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = lambda * B[i];
        w1[i] = l2s * Bx[i];
        w2[i] = l2s * lambda * Bxx[i];
        h[i] = Btt[i];
    }
    RealField w3 = Spectral::derivative(w2, 1);
    RealField w5 = Spectral::derivative(w2, 3);
    RealField wt = Spectral::derivative(h, 1);  // = lambda (dx Btilde_t)(scaled)
    const double ml = bp.mu * lambda;
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wv = w[i], wx = w1[i], wxx = w2[i], wxxx = w3[i];
        const double n2 = 20.0 * ml * wv * wxxx + 40.0 * ml * wx * wxx +
                          180.0 * ml * ml * wv * wv * wx;
        const double n3 = 10.0 * wv * wv * wxxx + 10.0 * wx * wx * wx + 40.0 * wv * wx * wxx +
                          30.0 * std::pow(wv, 4) * wx;
        const double sn = 120.0 * std::pow(ml, 3) * wv * wx + 120.0 * ml * std::pow(wv, 3) * wx;
        const double r = std::pow(lambda, 5) * wt[i] + w5[i] + 10.0 * ml * ml * wxxx + n2 + n3 + sn;
        sup = std::max(sup, std::fabs(r));
    }
    return sup;
}

void SimConfig::validate() const {
    gardner.validate();
    if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SimConfig: dt must be nonzero");
    if (!(t_end > 0.0)) throw std::invalid_argument("SimConfig: t_end must be positive");
    if (std::fabs(dt) > t_end) throw std::invalid_argument("SimConfig: |dt| must not exceed t_end");
    if (diag_stride < 1) throw std::invalid_argument("SimConfig: diag_stride must be >= 1");
    if (equation == EquationForm::original && gardner.lambda != 1.0)
        throw std::invalid_argument("SimConfig: original equation forces lambda = 1");
}

Stepper::Stepper(GridPtr grid, const GardnerParams& gp, double dt, Scheme scheme,
                 bool nonlinear_enabled, bool ablate_high_low)
    : grid_(std::move(grid)),
      gp_(gp),
      dt_(dt),
      scheme_(scheme),
      nonlinear_enabled_(nonlinear_enabled),
      ablate_(ablate_high_low) {
    gp_.validate();
    auto& sp = Spectral::get(grid_->n());
    const std::size_t nb = sp.nbins();
    E_.resize(nb);
    E2_.resize(nb);
    Q_.resize(nb);
    Qb_.resize(nb);
    P1_.resize(nb);
    P2_.resize(nb);
    f1_.resize(nb);
    f2_.resize(nb);
    f3_.resize(nb);
    lin_.resize(nb);
    const auto& k = grid_->wavenumbers();
    for (std::size_t j = 0; j < nb; ++j) {
        cplx ell = (j == nb - 1) ? cplx(0.0, 0.0) : linear_symbol(k[j], gp_);
        lin_[j] = ell;
        const cplx z = ell * dt_;
        E_[j] = std::exp(z);
        E2_[j] = std::exp(0.5 * z);
        // Kassam-Trefethen: phi-functions as 32-point unit-circle means
        // centered at z (mean-value property of analytic functions)
        cplx q = 0.0, qb = 0.0, p1 = 0.0, p2 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
        for (int m = 0; m < kContourPoints; ++m) {
            const double th = M_PI * (m + 0.5) / kContourPoints;
            const cplx r = std::polar(1.0, th);
            for (int sgn = 0; sgn < 2; ++sgn) {
                const cplx LR = z + (sgn ? std::conj(r) : r);
                const cplx eLR = std::exp(LR);
                const cplx eLR2 = std::exp(0.5 * LR);
                const cplx LR2 = LR * LR, LR3 = LR2 * LR;
                q += (eLR2 - 1.0) / LR;
                qb += 4.0 * (eLR2 - 1.0 - 0.5 * LR) / LR2;
                p1 += (eLR - 1.0) / LR;
                p2 += (eLR - 1.0 - LR) / LR2;
                a1 += (-4.0 - LR + eLR * (4.0 - 3.0 * LR + LR2)) / LR3;
                a2 += (2.0 + LR + eLR * (-2.0 + LR)) / LR3;
                a3 += (-4.0 - 3.0 * LR - LR2 + eLR * (4.0 - LR)) / LR3;
            }
        }
        const double inv = 1.0 / (2.0 * kContourPoints);
        Q_[j] = dt_ * q * inv;        // (h/2) phi1(z/2)
        Qb_[j] = dt_ * qb * inv;      // h phi2(z/2)
        P1_[j] = dt_ * p1 * inv;      // h phi1(z)
        P2_[j] = dt_ * p2 * inv;      // h phi2(z)
        f1_[j] = dt_ * a1 * inv;      // h (phi1 - 3 phi2 + 4 phi3)
        f2_[j] = dt_ * a2 * inv;      // h (phi2 - 2 phi3)
        f3_[j] = dt_ * a3 * inv;      // h (4 phi3 - phi2)
    }
    const std::size_t m = sp.fine_n();
    fw_.resize(m);
    fw1_.resize(m);
    fw2_.resize(m);
    fw3_.resize(m);
    fnl_.resize(m);
    ha_.resize(nb);
    hb_.resize(nb);
    hc_.resize(nb);
    Nu_.resize(nb);
    Na_.resize(nb);
    Nb_.resize(nb);
    Nc_.resize(nb);
}

void Stepper::nonlinear(const std::vector<cplx>& hat, std::vector<cplx>& out) {
    if (!nonlinear_enabled_) {
        std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
        return;
    }
    auto& sp = Spectral::get(grid_->n());
    const std::size_t nb = sp.nbins();
    const auto& k = grid_->wavenumbers();
    std::vector<cplx> h(nb);
    sp.to_fine(hat, fw_);
    for (std::size_t j = 0; j < nb; ++j) {
        const double kj = (j + 1 < nb) ? k[j] : 0.0;
        h[j] = hat[j] * cplx(0.0, kj);
    }
    sp.to_fine(h, fw1_);
    for (std::size_t j = 0; j < nb; ++j) {
        const double kj = (j + 1 < nb) ? k[j] : grid_->kmax();
        h[j] = hat[j] * cplx(-kj * kj, 0.0);
    }
    sp.to_fine(h, fw2_);
    for (std::size_t j = 0; j < nb; ++j) {
        const double kj = (j + 1 < nb) ? k[j] : 0.0;
        h[j] = hat[j] * cplx(0.0, -kj * kj * kj);
    }
    h[nb - 1] = 0.0;
    sp.to_fine(h, fw3_);
    const NlCoef c = nl_coef(gp_, ablate_);
    kern::ops().gardner_nl(fnl_.data(), fw_.data(), fw1_.data(), fw2_.data(), fw3_.data(), c.ww3,
                           c.w1w2, c.w2w1, c.ww1, c.w3w1, fnl_.size());
    sp.from_fine(fnl_, out);
}

void Stepper::step(std::vector<cplx>& hat) {
    const std::size_t nb = hat.size();
    auto& K = kern::ops();
    if (scheme_ == Scheme::etdrk4) {
        // Krogstad stage arrangement: same phi-weights in the final combine as
        // Cox-Matthews, but the internal stages carry phi2 corrections, which
        // avoids the stiff order reduction of the classical arrangement on
        // the k^5 symbol
        nonlinear(hat, Nu_);
        K.cstage(ha_.data(), E2_.data(), hat.data(), Q_.data(), Nu_.data(), nb);
        nonlinear(ha_, Na_);
        for (std::size_t j = 0; j < nb; ++j)
            hb_[j] = E2_[j] * hat[j] + (Q_[j] - Qb_[j]) * Nu_[j] + Qb_[j] * Na_[j];
        nonlinear(hb_, Nb_);
        for (std::size_t j = 0; j < nb; ++j)
            hc_[j] = E_[j] * hat[j] + (P1_[j] - 2.0 * P2_[j]) * Nu_[j] + 2.0 * P2_[j] * Nb_[j];
        nonlinear(hc_, Nc_);
        K.ccombine(hat.data(), E_.data(), hat.data(), f1_.data(), Nu_.data(), f2_.data(),
                   Na_.data(), Nb_.data(), f3_.data(), Nc_.data(), nb);
    } else {
        // integrating-factor RK4
        nonlinear(hat, Nu_);
        for (std::size_t j = 0; j < nb; ++j) ha_[j] = E2_[j] * (hat[j] + 0.5 * dt_ * Nu_[j]);
        nonlinear(ha_, Na_);
        for (std::size_t j = 0; j < nb; ++j) hb_[j] = E2_[j] * hat[j] + 0.5 * dt_ * Na_[j];
        nonlinear(hb_, Nb_);
        for (std::size_t j = 0; j < nb; ++j) hc_[j] = E_[j] * hat[j] + dt_ * E2_[j] * Nb_[j];
        nonlinear(hc_, Nc_);
        for (std::size_t j = 0; j < nb; ++j)
            hat[j] = E_[j] * hat[j] +
                     dt_ / 6.0 *
                         (E_[j] * Nu_[j] + 2.0 * E2_[j] * (Na_[j] + Nb_[j]) + Nc_[j]);
    }
}

double Stepper::dispersion_self_test(const GardnerParams& gp, double dt) {
    const double L = M_PI;
    const std::size_t n = 64;
    GridPtr g = Grid::make(L, n);
    const double k0 = 2.0;
    RealField u0 = RealField::zeros(g);
    for (std::size_t i = 0; i < n; ++i) u0[i] = std::cos(k0 * g->node(i));
    Stepper st(g, gp, dt, Scheme::etdrk4, /*nonlinear_enabled=*/false);
    auto& sp = Spectral::get(n);
    auto hat = sp.forward(u0);
    st.step(hat);
    RealField u1 = sp.inverse(g, hat);
    const double ml = gp.mu_eff();
    const double w = -std::pow(k0, 5) + 10.0 * ml * ml * std::pow(k0, 3);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        err = std::max(err, std::fabs(u1[i] - std::cos(k0 * g->node(i) + w * dt)));
    return err;
}

double track_peak(const RealField& u) {
    const std::size_t n = u.size();
    const double bnd = u.boundary_level();
    std::size_t imax = 0;
    double vmax = u[0];
    for (std::size_t i = 1; i < n; ++i)
        if (u[i] > vmax) { vmax = u[i]; imax = i; }
    if (imax == 0 || imax == n - 1 || vmax <= 3.0 * bnd)
        throw std::runtime_error("track_peak: no clear interior maximum");
    const double floor = std::max(3.0 * bnd, 0.5 * vmax);
    std::size_t peaks = 0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (u[i] > floor && u[i] >= u[i - 1] && u[i] > u[i + 1]) ++peaks;
    if (peaks != 1) throw std::runtime_error("track_peak: maximum is not unique");
    const double ym = u[imax - 1], y0 = u[imax], yp = u[imax + 1];
    const double denom = ym - 2.0 * y0 + yp;
    const double shift = (denom != 0.0) ? 0.5 * (ym - yp) / denom : 0.0;
    return u.grid().node(imax) + shift * u.grid().dx();
}

RunResult run(const SimConfig& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    GridPtr grid = cfg.make_grid();
    GardnerParams gp = cfg.gardner;
    if (cfg.equation == EquationForm::original) gp.lambda = 1.0;

    const bool is_breather = std::holds_alternative<exact::BreatherParams>(cfg.initial);
    const bool is_soliton = std::holds_alternative<exact::SolitonParams>(cfg.initial);
    RealField u0 = [&]() -> RealField {
        if (is_breather)
            return exact::breather_eval(std::get<exact::BreatherParams>(cfg.initial), 0.0, grid);
        if (is_soliton)
            return exact::soliton_eval(std::get<exact::SolitonParams>(cfg.initial), 0.0, grid);
        return std::get<RealField>(cfg.initial);
    }();
    require_decay(u0, 1e-12, "initial condition");

    if (Stepper::dispersion_self_test(gp, cfg.dt) > 1e-12)
        throw std::runtime_error("run: dispersion self-test failed");

    Stepper st(grid, gp, cfg.dt, cfg.scheme, true, cfg.ablate_high_low);
    auto& sp = Spectral::get(grid->n());
    auto hat = sp.forward(u0);

    {  // stability pre-flight: one trial step must stay finite
        auto trial = hat;
        st.step(trial);
        RealField probe = sp.inverse(grid, trial);
        if (!probe.all_finite())
            throw std::runtime_error("run: trial step produced non-finite values");
    }

    RunResult res{RealField::zeros(grid), {}, false, 0.0, 0.0};
    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / std::fabs(cfg.dt)));
    auto diagnose = [&](double t, const RealField& u) {
        DiagnosticsRow row;
        row.t = t;
        row.mass = functionals::mass(u);
        row.energy = functionals::energy_mu(u, gp);
        row.energy5 = functionals::energy5_mu(u, gp);
        row.hs_norm = Spectral::sobolev_norm(u, cfg.hs_diag_s);
        if (is_breather) {
            RealField ex =
                exact::breather_eval(std::get<exact::BreatherParams>(cfg.initial), t, grid);
            double acc = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                acc += (u[i] - ex[i]) * (u[i] - ex[i]);
            row.l2_error = std::sqrt(acc * grid->dx());
        } else if (is_soliton) {
            RealField ex = exact::soliton_eval(std::get<exact::SolitonParams>(cfg.initial), t, grid);
            double acc = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                acc += (u[i] - ex[i]) * (u[i] - ex[i]);
            row.l2_error = std::sqrt(acc * grid->dx());
            try {
                row.peak_x = track_peak(u);
            } catch (const std::runtime_error&) {
            }
        }
        res.diagnostics.push_back(row);
    };

    diagnose(0.0, u0);
    double t = 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
        st.step(hat);
        t = cfg.dt * static_cast<double>(i);
        const bool want_diag = (i % cfg.diag_stride == 0) || i == steps;
        if (want_diag) {
            RealField u = sp.inverse(grid, hat);
            if (!u.all_finite()) {
                res.blow_up = true;
                break;
            }
            res.last_good_t = t;
            diagnose(t, u);
        }
    }
    res.final = sp.inverse(grid, hat);
    if (!res.final.all_finite()) res.blow_up = true;
    res.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

}  // namespace g5::dynamics
