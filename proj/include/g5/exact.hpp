#pragma once

#include "g5/grid.hpp"
#include "g5/spectral.hpp"

// Closed-form solutions of the fifth-order Gardner equation and residual
// evaluators for the nonlinear identities its breather satisfies.
namespace g5::exact {

struct SolitonParams {
    double mu;  // > 0
    double c;   // > 0
    double x1 = 0.0;

    double speed() const { return c * c + 10.0 * mu * mu * c; }
    void validate() const;
};

struct BreatherParams {
    double alpha;  // != 0
    double beta;   // != 0
    double mu;     // > 0
    double x1 = 0.0;
    double x2 = 0.0;

    double delta() const { return alpha * alpha + beta * beta - 4.0 * mu * mu; }
    bool stability_regime() const {
        return mu > 0.0 && mu < 0.5 * std::sqrt(alpha * alpha + beta * beta);
    }
    // velocities of the two traveling phases y1, y2
    double delta5() const;
    double gamma5() const;
    double a1() const {
        const double r = alpha * alpha + beta * beta;
        return r * r;
    }
    double a2() const { return 2.0 * (alpha * alpha - beta * beta - 5.0 * mu * mu); }
    void validate() const;
};

// F, G and their x/t derivatives at one space-time point (f2, g2 are the
// t-derivatives; the rest follow the derivative chain f->f1->f3->f4).
struct FGParts {
    double f, f1, f2, f3, f4;
    double g, g1, g2, g3, g4;
    double D;  // f^2 + g^2
};

FGParts breather_fg(const BreatherParams& p, double t, double x);

RealField soliton_eval(const SolitonParams& p, double t, const GridPtr& grid);

struct SolitonResiduals {
    double ode2_sup;  // Q'' - cQ + 6 mu Q^2 + 2 Q^3
    double ode4_sup;  // Q'''' - v Q + f5(Q)
};
SolitonResiduals soliton_residuals(const SolitonParams& p, const GridPtr& grid);

RealField breather_eval(const BreatherParams& p, double t, const GridPtr& grid);
// closed-form spatial derivatives of B (quotient forms over D^2, D^3)
RealField breather_x(const BreatherParams& p, double t, const GridPtr& grid);
RealField breather_xx(const BreatherParams& p, double t, const GridPtr& grid);
// antiderivative 2*atan2(G, F), branch-unwrapped along the grid
RealField breather_tilde(const BreatherParams& p, double t, const GridPtr& grid);
RealField breather_tilde_t(const BreatherParams& p, double t, const GridPtr& grid);
// closed-form d^2/dx^2 log(F^2 + G^2)
RealField breather_d2_log_d(const BreatherParams& p, double t, const GridPtr& grid);

double breather_mass_closed(const BreatherParams& p);

enum class Direction { alpha, beta, x1, x2 };
// 4th-order central finite difference in the named parameter,
// h = step_scale * max(1, |parameter|)
RealField param_derivative(const BreatherParams& p, double t, const GridPtr& grid,
                           Direction which, double step_scale = 1e-3);

// exact translation-mode fields B1 = d/dx1 B, B2 = d/dx2 B
RealField kernel_dx1(const BreatherParams& p, double t, const GridPtr& grid);
RealField kernel_dx2(const BreatherParams& p, double t, const GridPtr& grid);

enum class IdentityKind { matsuno, integrated, time_identity, stationary, pde };
const char* identity_name(IdentityKind k);

struct Residual {
    double sup;
    double l2;
};

// left-minus-right of the named identity; closed forms for B, B_x, B_xx and
// all time derivatives, spectral differentiation above second order.
// negative_control flips one designated sign to confirm the test has power.
Residual identity_residual(IdentityKind kind, const BreatherParams& p, double t,
                           const GridPtr& grid, bool negative_control = false);

// same parameters with x2 shifted so the envelope stays centered at time t
BreatherParams recentered(const BreatherParams& p, double t);

// both preflight checks used by every whole-line evaluation
void require_resolved(const RealField& u, const std::string& what);

// smallest grid (n in {2048, 4096, 8192} at the given half-length) that
// resolves the breather; keeping k_max low caps the rounding amplification
// of fourth-derivative applications
GridPtr resolved_grid(const BreatherParams& p, double t, double half_length);

}  // namespace g5::exact
