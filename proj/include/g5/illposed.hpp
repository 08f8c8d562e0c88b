#pragma once

#include <cstdint>
#include <vector>

#include "g5/dynamics.hpp"
#include "g5/functionals.hpp"
#include "g5/grid.hpp"

// Wave-packet ill-posedness experiments: smooth bumps, twin initial data with
// opposite low parts, the H^s norm limit of the modulated packet, and the
// twin-evolution divergence driven by the high-low coupling.
namespace g5::illposed {

struct IllposedParams {
    double N;      // carrier frequency, >= 4
    double delta;  // in (0,1), > max(0, 2-2s)
    double s;      // > 0
    double eps;    // in (0, 0.1]
    GardnerParams gardner{1.0, 1.0};

    double width() const { return std::pow(N, 4.0 + delta); }
    void validate() const;
};

// phi: 1 on |x|<1, 0 on |x|>2, exp(-1/t) glue on the transition
double bump(double x);
// phi_tilde = phi(x/2); identically 1 on supp phi
double bump_tilde(double x);

struct TwinInitials {
    RealField u_plus;
    RealField u_minus;
};
TwinInitials build_initials(const IllposedParams& p, const GridPtr& grid);

// Phi_N(t) = (N^5 - 10 mu^2 lambda^2 N^3) t
double phase(const IllposedParams& p, double t);

// smallest admissible twin grid: L >= 4.2*N^{4+delta}, dx <= pi/(8N);
// refuses grids above 2^24 points
GridPtr recommended_grid(const IllposedParams& p);

// ||phi||_L2 by quadrature on a fine grid
double phi_l2();

// N^{-(4+delta)/2-s} ||phi_N(x) sin(Nx+gamma)||_{H^s} via the modulation
// representation (two Fourier bumps at +-N; exact up to the tail of phi-hat)
double scaled_norm_modulation(double N, double delta, double s, double gamma);

// same quantity assembled on a carrier-resolving grid; resource-guarded
double scaled_norm_direct(double N, double delta, double s, double gamma);

struct NormScanRow {
    double N;
    double scaled_norm;
    double target;
    double rel_err;
};
struct NormScanResult {
    std::vector<NormScanRow> rows;
    double extrapolated;     // Richardson in 1/N^2 from the two largest N
    double analytic_limit;   // ||phi||_L2 / sqrt(2)
};
NormScanResult norm_scan(double delta, double s, const std::vector<double>& Ns, double gamma);

struct TwinFit {
    double amplitude;
    double rel_residual;
};
struct TwinResult {
    std::vector<double> times;
    std::vector<double> distance;  // d(t) = ||u+ - u-||_{H^s}
    TwinFit fit;        // model A |sin(sigma_pred t)|
    TwinFit fit_unit;   // the paper-normalized model A |sin t|
    double sigma_pred;  // derived high-low phase rate
    double d0;
    double mass_drift_plus;
    double mass_drift_minus;
    double runtime_seconds;
};

// derived phase rate of the twin separation: the w w_3x and w w_x couplings
// against the low plateau eps N^{-3} give 20 mu lam eps (1 - 6 (mu lam)^2/N^2)
double predicted_rate(const IllposedParams& p);

TwinResult twin_divergence(const IllposedParams& p, const GridPtr& grid, double dt, double t_end,
                           std::size_t diag_stride, bool ablate_high_low);

}  // namespace g5::illposed
