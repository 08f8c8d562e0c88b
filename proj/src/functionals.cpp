#include "g5/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "g5/spectral.hpp"

namespace g5 {

void GardnerParams::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("GardnerParams: mu must be > 0");
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("GardnerParams: lambda must be in (0, 1]");
    if (mu * lambda > 1.0)
        throw std::invalid_argument("GardnerParams: requires mu*lambda <= 1");
}

namespace functionals {

double mass(const RealField& u) {
    double acc = 0.0;
    for (double v : u.values()) acc += v * v;
    return 0.5 * acc * u.grid().dx();
}

double energy_mu(const RealField& u, const GardnerParams& gp) {
    const double m = gp.mu_eff();
    RealField ux = Spectral::derivative(u, 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i];
        acc += 0.5 * ux[i] * ux[i] - 2.0 * m * v * v * v - 0.5 * v * v * v * v;
    }
    return acc * u.grid().dx();
}

double energy5_mu(const RealField& u, const GardnerParams& gp) {
    const double m = gp.mu_eff();
    RealField ux = Spectral::derivative(u, 1);
    RealField uxx = Spectral::derivative(u, 2);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i], vx = ux[i];
        acc += 0.5 * uxx[i] * uxx[i] - 10.0 * m * v * vx * vx + 10.0 * m * m * std::pow(v, 4) -
               5.0 * v * v * vx * vx + 6.0 * m * std::pow(v, 5) + std::pow(v, 6);
    }
    return acc * u.grid().dx();
}

double lyapunov(const RealField& u, const exact::BreatherParams& bp) {
    bp.validate();
    GardnerParams gp{bp.mu, 1.0};
    const double a2 = bp.alpha * bp.alpha, b2 = bp.beta * bp.beta;
    return energy5_mu(u, gp) + 2.0 * (b2 - a2) * energy_mu(u, gp) + bp.a1() * mass(u);
}

FunctionalReport report(const RealField& u, const GardnerParams& gp,
                        const std::optional<exact::BreatherParams>& bp) {
    FunctionalReport r;
    r.mass = mass(u);
    r.energy = energy_mu(u, gp);
    r.energy5 = energy5_mu(u, gp);
    if (bp) r.lyapunov = lyapunov(u, *bp);
    return r;
}

}  // namespace functionals
}  // namespace g5
