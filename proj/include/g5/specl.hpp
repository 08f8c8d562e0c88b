#pragma once

#include <cstdint>
#include <vector>

#include "g5/exact.hpp"
#include "g5/grid.hpp"

// The linearized operator about the breather: matrix-free application,
// quadratic form, closed-form spectral targets, dense eigenanalysis,
// kernel/Wronskian checks and the coercivity probe.
namespace g5::specl {

// The paper's printed operator and the divergence-form self-adjoint operator
// d^4 + d(a d) + c_W generate the same quadratic form; only the self-adjoint
// form annihilates the translation modes B1, B2 pointwise.
enum class OperatorForm { printed, self_adjoint };

RealField apply_linearized(const exact::BreatherParams& bp, double t, const RealField& z,
                           OperatorForm form = OperatorForm::self_adjoint);

// int L z . z  (identical for both operator forms)
double quadratic_form(const exact::BreatherParams& bp, double t, const RealField& z);

struct SpectralTargets {
    double qf_alpha;       // int Lambda_a B . L[Lambda_a B]  > 0
    double qf_beta;        // int Lambda_b B . L[Lambda_b B]  < 0
    double b0_inner;       // int B_0 B                        > 0
    double spectrum_edge;  // bottom of the continuous spectrum
};
SpectralTargets closed_form_targets(const exact::BreatherParams& bp);

// B_0 = (alpha Lambda_b B + beta Lambda_a B) / (8 alpha beta (alpha^2+beta^2))
RealField b0_direction(const exact::BreatherParams& bp, double t, const GridPtr& grid);

struct EigPair {
    double value;
    RealField field;  // unit discrete-L2 norm
};
// lowest `count` eigenpairs of the symmetrized Fourier-collocation matrix
std::vector<EigPair> eig_low(const exact::BreatherParams& bp, double t, const GridPtr& grid,
                             std::size_t count);

struct CoercivityResult {
    double min_ratio;            // min Q[z]/||z||_{H^2}^2 after projection
    double negative_dir_ratio;   // the same ratio for the unprojected negative direction
    std::size_t trials;
};
CoercivityResult coercivity_probe(const exact::BreatherParams& bp, double t, const GridPtr& grid,
                                  std::size_t trials, std::uint64_t seed,
                                  const RealField& negative_direction, double probe_band = 0.0);

struct WronskianResult {
    double sup_mismatch;          // against the corrected closed form
    double sup_mismatch_printed;  // against the closed form exactly as printed
};
WronskianResult wronskian_check(const exact::BreatherParams& bp, double t, const GridPtr& grid);

// dense symmetrized collocation matrix (row-major n x n); exposed for tests
std::vector<double> assemble_matrix(const exact::BreatherParams& bp, double t,
                                    const GridPtr& grid);

// smooth decaying random probe: Gaussian envelope times a band-limited
// Fourier polynomial; kband = 0 selects the default |k| <= kmax/4
RealField random_probe(const GridPtr& grid, std::uint64_t seed, double kband = 0.0);

}  // namespace g5::specl
