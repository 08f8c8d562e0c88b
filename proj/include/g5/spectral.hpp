#pragma once

#include <complex>
#include <span>
#include <vector>

#include "g5/grid.hpp"

// FFTW-backed periodic spectral engine.
//
// Transform convention (fixed): u_hat(k_j) = dx * sum_i u(x_i) exp(-i k_j x_i),
// the trapezoid approximation of the continuum transform. Internally the raw
// DFT coefficients c_j = sum_i u_i exp(-2*pi*i*ij/n) are stored (half spectrum,
// real transforms); u_hat(k_j) = dx * (-1)^j * c_j. Norms and diagonal
// multipliers are phase-insensitive, so all routines work on c directly.
namespace g5 {

using cplx = std::complex<double>;

class Spectral {
  public:
    // Thread-local instance for size n (plans cached; FFTW planning serialized).
    static Spectral& get(std::size_t n);

    std::size_t n() const { return n_; }
    std::size_t nbins() const { return n_ / 2 + 1; }

    // raw half-spectrum DFT of u.values()
    std::vector<cplx> forward(const RealField& u);
    // inverse of a raw half-spectrum (scales by 1/n)
    RealField inverse(const GridPtr& grid, std::span<const cplx> hat);

    // (d/dx)^order via (ik)^order; odd-order Nyquist zeroed
    static RealField derivative(const RealField& u, int order);

    // H^s norm with the continuum-normalized transform; s = 0 gives L^2
    static double sobolev_norm(const RealField& u, double s);

    static double inner_l2(const RealField& u, const RealField& v);

    // alias-free pointwise product of 2..5 factors (3x zero padding)
    static RealField dealiased_product(std::span<const RealField> factors);

    // relative magnitude of the top 5% of |c_j|; used to verify a field is
    // spectrally resolved on its grid
    static double spectral_tail(const RealField& u);

    // trig interpolation of the half-spectrum onto the 3x padded grid
    void to_fine(std::span<const cplx> hat, std::span<double> fine);
    // project fine-grid samples back to the coarse half-spectrum
    void from_fine(std::span<const double> fine, std::span<cplx> hat);
    std::size_t fine_n() const { return 3 * n_; }

    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

  private:
    explicit Spectral(std::size_t n);

    struct Plans;
    std::size_t n_;
    Plans* plans_;
};

}  // namespace g5
