#pragma once

#include <optional>

#include "g5/exact.hpp"
#include "g5/grid.hpp"

// Conserved quantities and the breather Lyapunov functional.
namespace g5 {

struct GardnerParams {
    double mu;            // > 0
    double lambda = 1.0;  // in (0, 1]

    double mu_eff() const { return mu * lambda; }
    void validate() const;
};

struct FunctionalReport {
    double mass;
    double energy;
    double energy5;
    std::optional<double> lyapunov;
};

namespace functionals {

// M = 1/2 int u^2
double mass(const RealField& u);

// E = int( 1/2 u_x^2 - 2 mu_eff u^3 - 1/2 u^4 ); the rescaled law prints
// 2*mu*lambda u^3, so the one knob mu_eff covers both equation forms
double energy_mu(const RealField& u, const GardnerParams& gp);

// E5 = int( 1/2 u_xx^2 - 10 mu_eff u u_x^2 + 10 mu_eff^2 u^4 - 5 u^2 u_x^2
//           + 6 mu_eff u^5 + u^6 )
double energy5_mu(const RealField& u, const GardnerParams& gp);

// H = E5 + 2(beta^2-alpha^2) E + (alpha^2+beta^2)^2 M at lambda = 1
double lyapunov(const RealField& u, const exact::BreatherParams& bp);

FunctionalReport report(const RealField& u, const GardnerParams& gp,
                        const std::optional<exact::BreatherParams>& bp = {});

}  // namespace functionals
}  // namespace g5
