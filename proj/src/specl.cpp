#include "g5/specl.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "g5/spectral.hpp"

namespace g5::specl {
namespace {

struct Coefs {
    RealField a;   // 20 mu B + 10 B^2 - 2(b^2 - a^2)
    RealField ap;  // a' = 20 (mu + B) B_x
    RealField cl;  // zeroth order, printed split
    RealField cw;  // zeroth order, divergence form
};

Coefs coefs(const exact::BreatherParams& bp, double t, const GridPtr& grid) {
    RealField B = exact::breather_eval(bp, t, grid);
    RealField Bx = exact::breather_x(bp, t, grid);
    RealField Bxx = exact::breather_xx(bp, t, grid);
    const double mu = bp.mu;
    const double bb_aa = bp.beta * bp.beta - bp.alpha * bp.alpha;
    const double A1 = bp.a1();
    Coefs c{RealField::zeros(grid), RealField::zeros(grid), RealField::zeros(grid),
            RealField::zeros(grid)};
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const double b = B[i], bx = Bx[i];
        c.a[i] = 20.0 * mu * b + 10.0 * b * b - 2.0 * bb_aa;
        c.ap[i] = 20.0 * (mu + b) * bx;
        const double common = 120.0 * mu * mu * b * b + 120.0 * mu * b * b * b +
                              30.0 * std::pow(b, 4) - 2.0 * bb_aa * (12.0 * mu * b + 6.0 * b * b) +
                              A1;
        c.cl[i] = common - 10.0 * bx * bx;
        c.cw[i] = common + 10.0 * bx * bx + 20.0 * (mu + b) * Bxx[i];
    }
    return c;
}

RealField apply_with(const Coefs& c, const RealField& z, OperatorForm form) {
    RealField z1 = Spectral::derivative(z, 1);
    RealField z4 = Spectral::derivative(z, 4);
    RealField out = RealField::zeros(z.grid_ptr());
    if (form == OperatorForm::self_adjoint) {
        RealField az1 = RealField::zeros(z.grid_ptr());
        for (std::size_t i = 0; i < z.size(); ++i) az1[i] = c.a[i] * z1[i];
        RealField inner = Spectral::derivative(az1, 1);
        for (std::size_t i = 0; i < z.size(); ++i)
            out[i] = z4[i] + inner[i] + c.cw[i] * z[i];
    } else {
        RealField z2 = Spectral::derivative(z, 2);
        for (std::size_t i = 0; i < z.size(); ++i)
            out[i] = z4[i] + c.a[i] * z2[i] - c.ap[i] * z1[i] + c.cl[i] * z[i];
    }
    return out;
}

}  // namespace

RealField apply_linearized(const exact::BreatherParams& bp, double t, const RealField& z,
                           OperatorForm form) {
    bp.validate();
    RealField B = exact::breather_eval(bp, t, z.grid_ptr());
    require_decay(B, 1e-12, "breather");
    return apply_with(coefs(bp, t, z.grid_ptr()), z, form);
}

double quadratic_form(const exact::BreatherParams& bp, double t, const RealField& z) {
    RealField Lz = apply_linearized(bp, t, z, OperatorForm::printed);
    return Spectral::inner_l2(Lz, z);
}

SpectralTargets closed_form_targets(const exact::BreatherParams& bp) {
    bp.validate();
    if (!bp.stability_regime())
        throw std::invalid_argument("closed_form_targets: outside the stability regime");
    const double a = bp.alpha, b = bp.beta, mu = bp.mu;
    const double a2 = a * a, b2 = b * b, m2 = mu * mu;
    const double D = bp.delta();
    const double den = D * D + 16.0 * m2 * b2;
    SpectralTargets s;
    s.qf_alpha = 16.0 * a2 * b * (1.0 + 4.0 * m2 * D / den);
    s.qf_beta =
        -16.0 * b * (a2 + 2.0 * m2 * (1.0 + (D - 2.0 * b2) * (a2 + b2 + 4.0 * m2) / den));
    s.b0_inner = (1.0 / (4.0 * b * (a2 + b2))) * (D * D + 4.0 * m2 * D) / den;
    s.spectrum_edge = (b >= a) ? (a2 + b2) * (a2 + b2) : 4.0 * a2 * b2;
    return s;
}

RealField b0_direction(const exact::BreatherParams& bp, double t, const GridPtr& grid) {
    bp.validate();
    if (!bp.stability_regime())
        throw std::invalid_argument("b0_direction: outside the stability regime");
    RealField la = exact::param_derivative(bp, t, grid, exact::Direction::alpha);
    RealField lb = exact::param_derivative(bp, t, grid, exact::Direction::beta);
    const double scale = 1.0 / (8.0 * bp.alpha * bp.beta * (bp.alpha * bp.alpha + bp.beta * bp.beta));
    RealField out = RealField::zeros(grid);
    for (std::size_t i = 0; i < grid->n(); ++i)
        out[i] = scale * (bp.alpha * lb[i] + bp.beta * la[i]);
    return out;
}

std::vector<double> assemble_matrix(const exact::BreatherParams& bp, double t,
                                    const GridPtr& grid) {
    const std::size_t n = grid->n();
    const Coefs c = coefs(bp, t, grid);
    std::vector<double> A(n * n);
    RealField e = RealField::zeros(grid);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.values().begin(), e.values().end(), 0.0);
        e[j] = 1.0;
        RealField col = apply_with(c, e, OperatorForm::self_adjoint);
        for (std::size_t i = 0; i < n; ++i) A[i * n + j] = col[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (A[i * n + j] + A[j * n + i]);
            A[i * n + j] = s;
            A[j * n + i] = s;
        }
    return A;
}

std::vector<EigPair> eig_low(const exact::BreatherParams& bp, double t, const GridPtr& grid,
                             std::size_t count) {
    bp.validate();
    if (!bp.stability_regime())
        throw std::invalid_argument("eig_low: outside the stability regime");
    const std::size_t n = grid->n();
    if (n > 4096) throw std::invalid_argument("eig_low: dense solve limited to n <= 4096");
    std::vector<double> A = assemble_matrix(bp, t, grid);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
        A.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig_low: eigensolver failed");
    count = std::min(count, n);
    std::vector<EigPair> out;
    out.reserve(count);
    const double norm_scale = 1.0 / std::sqrt(grid->dx());
    for (std::size_t j = 0; j < count; ++j) {
        RealField f = RealField::zeros(grid);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)) *
                   norm_scale;
        out.push_back({solver.eigenvalues()(static_cast<Eigen::Index>(j)), std::move(f)});
    }
    return out;
}

RealField random_probe(const GridPtr& grid, std::uint64_t seed, double kband) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double L = grid->half_length();
    const double kcut = kband > 0.0 ? kband : grid->kmax() / 4.0;
    const auto& k = grid->wavenumbers();
    // band-limited random trig polynomial with decaying mode weights
    std::vector<std::pair<double, std::pair<double, double>>> modes;
    for (std::size_t j = 1; j < grid->n() / 2; ++j) {
        if (k[j] > kcut) break;
        modes.push_back({k[j], {gauss(rng), gauss(rng)}});
    }
    RealField z = RealField::zeros(grid);
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const double x = grid->node(i);
        const double env = std::exp(-std::pow(x / (L / 3.0), 2));
        double acc = 0.0;
        for (const auto& m : modes) {
            const double damp = std::exp(-m.first * m.first / (2.0 * kcut));
            acc += damp * (m.second.first * std::cos(m.first * x) +
                           m.second.second * std::sin(m.first * x));
        }
        z[i] = env * acc;
    }
    const double nrm = std::sqrt(Spectral::inner_l2(z, z));
    if (nrm > 0.0)
        for (auto& v : z.values()) v /= nrm;
    return z;
}

CoercivityResult coercivity_probe(const exact::BreatherParams& bp, double t, const GridPtr& grid,
                                  std::size_t trials, std::uint64_t seed,
                                  const RealField& negative_direction, double probe_band) {
    bp.validate();
    if (!bp.stability_regime())
        throw std::invalid_argument("coercivity_probe: outside the stability regime");
    RealField b1 = exact::kernel_dx1(bp, t, grid);
    RealField b2 = exact::kernel_dx2(bp, t, grid);

    std::vector<RealField> basis;
    auto orthonormalize = [&](RealField f) {
        for (const auto& b : basis) {
            const double c = Spectral::inner_l2(f, b);
            for (std::size_t i = 0; i < f.size(); ++i) f[i] -= c * b[i];
        }
        const double nrm = std::sqrt(Spectral::inner_l2(f, f));
        if (nrm > 1e-12)
            for (auto& v : f.values()) v /= nrm;
        basis.push_back(std::move(f));
    };
    orthonormalize(negative_direction);
    orthonormalize(b1);
    orthonormalize(b2);

    const Coefs c = coefs(bp, t, grid);
    auto ratio = [&](const RealField& z) {
        RealField Lz = apply_with(c, z, OperatorForm::printed);
        const double q = Spectral::inner_l2(Lz, z);
        const double h2 = Spectral::sobolev_norm(z, 2.0);
        return q / (h2 * h2);
    };

    CoercivityResult res{std::numeric_limits<double>::infinity(), ratio(negative_direction),
                         trials};
    std::size_t done = 0;
    std::uint64_t salt = 0;
    while (done < trials) {
        RealField z = random_probe(grid, seed + 1315423911ull * (++salt), probe_band);
        for (const auto& b : basis) {
            const double cc = Spectral::inner_l2(z, b);
            for (std::size_t i = 0; i < z.size(); ++i) z[i] -= cc * b[i];
        }
        const double nrm = std::sqrt(Spectral::inner_l2(z, z));
        if (nrm < 1e-8) continue;  // degenerate after projection; resample
        for (auto& v : z.values()) v /= nrm;
        res.min_ratio = std::min(res.min_ratio, ratio(z));
        ++done;
    }
    return res;
}

WronskianResult wronskian_check(const exact::BreatherParams& bp, double t, const GridPtr& grid) {
    bp.validate();
    if (!bp.stability_regime())
        throw std::invalid_argument("wronskian_check: outside the stability regime");
    RealField b1 = exact::kernel_dx1(bp, t, grid);
    RealField b2 = exact::kernel_dx2(bp, t, grid);
    RealField b1x = Spectral::derivative(b1, 1);
    RealField b2x = Spectral::derivative(b2, 1);

    const double a = bp.alpha, b = bp.beta, mu = bp.mu;
    const double a2 = a * a, b2_ = b * b, m2 = mu * mu;
    const double r2 = a2 + b2_;
    const double D = bp.delta();
    const double d5 = bp.delta5(), g5 = bp.gamma5();
    // r2^2 - 8 mu^2 (a^2 - 2 mu^2): the printed form mixes (a^2 - mu^2) into
    // two denominators; the consistent variant uses (a^2 - 2 mu^2) throughout
    const double cc = r2 * r2 - 8.0 * m2 * (a2 - 2.0 * m2);
    const double cp = r2 * r2 - 8.0 * m2 * (a2 - m2);

    double sup_num = 0.0, sup_corr = 0.0, sup_printed = 0.0;
    const double C0 = 2.0 * std::pow(b, 3) * r2 * r2 * cc / std::pow(D, 3);
    for (std::size_t i = 0; i < grid->n(); ++i) {
        const double x = grid->node(i);
        const double y1 = x + d5 * t + bp.x1;
        const double y2 = x + g5 * t + bp.x2;
        const exact::FGParts P = exact::breather_fg(bp, t, x);
        // scale by s^2 per factor so D_mu^2 ~ e^{4 b|y2|} never materializes
        const double s = std::max({std::fabs(P.f), std::fabs(P.g), 1.0});
        const double s2 = s * s;
        const double Dbar = (P.f / s) * (P.f / s) + (P.g / s) * (P.g / s);
        const double num = b1[i] * b2x[i] - b2[i] * b1x[i];
        const double sh = std::sinh(2.0 * b * y2) / s2 / s2;
        const double ch = std::cosh(2.0 * b * y2) / s2 / s2;
        const double sn = std::sin(2.0 * a * y1) / s2 / s2;
        const double cs = std::cos(2.0 * a * y1) / s2 / s2;
        auto bracket = [&](double c_cosh, double c_sin, double c_cos) {
            return sh + 8.0 * b2_ * m2 * ch / c_cosh -
                   b * D * (r2 * r2 - 4.0 * m2 * (a2 - b2_)) * sn / (a * r2 * c_sin) +
                   8.0 * b2_ * m2 * D * cs / (r2 * c_cos);
        };
        const double corr = -C0 * bracket(cc, cc, cc) / (Dbar * Dbar);
        const double printed = C0 * bracket(cp, cp, cc) / (Dbar * Dbar);
        sup_num = std::max(sup_num, std::fabs(num));
        sup_corr = std::max(sup_corr, std::fabs(num - corr));
        sup_printed = std::max(sup_printed, std::fabs(num - printed));
    }
    return {sup_corr / sup_num, sup_printed / sup_num};
}

}  // namespace g5::specl
