#include "g5/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "g5/kernels.hpp"

namespace g5 {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct Spectral::Plans {
    std::size_t n, m;  // coarse and padded sizes
    double* rbuf;
    fftw_complex* cbuf;
    double* rfine;
    fftw_complex* cfine;
    fftw_plan fwd, inv, fwd_fine, inv_fine;

    explicit Plans(std::size_t n_) : n(n_), m(3 * n_) {
        rbuf = fftw_alloc_real(n);
        cbuf = fftw_alloc_complex(n / 2 + 1);
        rfine = fftw_alloc_real(m);
        cfine = fftw_alloc_complex(m / 2 + 1);
        std::lock_guard<std::mutex> lock(planner_mutex());
        // FFTW_ESTIMATE keeps plan choice deterministic run to run
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), rbuf, cbuf, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), cbuf, rbuf, FFTW_ESTIMATE);
        fwd_fine = fftw_plan_dft_r2c_1d(static_cast<int>(m), rfine, cfine, FFTW_ESTIMATE);
        inv_fine = fftw_plan_dft_c2r_1d(static_cast<int>(m), cfine, rfine, FFTW_ESTIMATE);
    }
    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        fftw_destroy_plan(fwd_fine);
        fftw_destroy_plan(inv_fine);
        fftw_free(rbuf);
        fftw_free(cbuf);
        fftw_free(rfine);
        fftw_free(cfine);
    }
};

Spectral::Spectral(std::size_t n) : n_(n), plans_(new Plans(n)) {}
Spectral::~Spectral() { delete plans_; }

Spectral& Spectral::get(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<Spectral>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::unique_ptr<Spectral>(new Spectral(n));
    return *slot;
}

std::vector<cplx> Spectral::forward(const RealField& u) {
    std::memcpy(plans_->rbuf, u.values().data(), n_ * sizeof(double));
    fftw_execute(plans_->fwd);
    std::vector<cplx> out(nbins());
    std::memcpy(out.data(), plans_->cbuf, nbins() * sizeof(cplx));
    return out;
}

RealField Spectral::inverse(const GridPtr& grid, std::span<const cplx> hat) {
    std::memcpy(plans_->cbuf, hat.data(), nbins() * sizeof(cplx));
    fftw_execute(plans_->inv);
    std::vector<double> v(n_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = plans_->rbuf[i] * scale;
    return RealField(grid, std::move(v));
}

RealField Spectral::derivative(const RealField& u, int order) {
    if (order < 1 || order > 5)
        throw std::invalid_argument("spectral derivative order must be in 1..5");
    auto& sp = Spectral::get(u.grid().n());
    auto hat = sp.forward(u);
    const auto& k = u.grid().wavenumbers();
    const std::size_t nb = sp.nbins();
    for (std::size_t j = 0; j < nb; ++j) {
        const double kj = (j < nb - 1) ? k[j] : u.grid().kmax();
        double p = std::pow(kj, order);
        cplx mult;
        switch (order % 4) {
            case 0: mult = cplx(p, 0); break;
            case 1: mult = cplx(0, p); break;
            case 2: mult = cplx(-p, 0); break;
            default: mult = cplx(0, -p); break;
        }
        hat[j] *= mult;
    }
    if (order % 2 == 1) hat[nb - 1] = 0.0;  // keep odd derivatives real
    return sp.inverse(u.grid_ptr(), hat);
}

double Spectral::sobolev_norm(const RealField& u, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    auto& sp = Spectral::get(u.grid().n());
    auto hat = sp.forward(u);
    const auto& k = u.grid().wavenumbers();
    const std::size_t nb = sp.nbins();
    std::vector<double> w(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        const double kj = (j < nb - 1) ? k[j] : u.grid().kmax();
        const double weight = (j == 0 || j == nb - 1) ? 1.0 : 2.0;
        w[j] = weight * std::pow(1.0 + kj * kj, s);
    }
    const double sum = kern::ops().wsumsq(w.data(), hat.data(), nb);
    // (dx/n) * sum == (1/2pi) * sum_j <k>^{2s} |u_hat|^2 dk with u_hat = dx*c
    return std::sqrt(sum * u.grid().dx() / static_cast<double>(u.grid().n()));
}

double Spectral::inner_l2(const RealField& u, const RealField& v) {
    require_same_grid(u, v);
    return kern::ops().dot(u.values().data(), v.values().data(), u.size()) * u.grid().dx();
}

double Spectral::spectral_tail(const RealField& u) {
    auto& sp = Spectral::get(u.grid().n());
    auto hat = sp.forward(u);
    double peak = 0.0, tail = 0.0;
    const std::size_t nb = sp.nbins();
    const std::size_t cut = nb - std::max<std::size_t>(2, nb / 20);
    for (std::size_t j = 0; j < nb; ++j) {
        const double m = std::abs(hat[j]);
        peak = std::max(peak, m);
        if (j >= cut) tail = std::max(tail, m);
    }
    return peak > 0.0 ? tail / peak : 0.0;
}

void Spectral::to_fine(std::span<const cplx> hat, std::span<double> fine) {
    const std::size_t mb = plans_->m / 2 + 1;
    std::memset(plans_->cfine, 0, mb * sizeof(cplx));
    std::memcpy(plans_->cfine, hat.data(), nbins() * sizeof(cplx));
    // the coarse Nyquist bin becomes an interior fine bin (counted twice by c2r)
    plans_->cfine[nbins() - 1][0] *= 0.5;
    plans_->cfine[nbins() - 1][1] = 0.0;
    fftw_execute(plans_->inv_fine);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < plans_->m; ++i) fine[i] = plans_->rfine[i] * scale;
}

void Spectral::from_fine(std::span<const double> fine, std::span<cplx> hat) {
    std::memcpy(plans_->rfine, fine.data(), plans_->m * sizeof(double));
    fftw_execute(plans_->fwd_fine);
    const double scale = static_cast<double>(n_) / static_cast<double>(plans_->m);
    for (std::size_t j = 0; j + 1 < nbins(); ++j) {
        cplx c;
        std::memcpy(&c, &plans_->cfine[j], sizeof(cplx));
        hat[j] = c * scale;
    }
    hat[nbins() - 1] = 2.0 * scale * plans_->cfine[nbins() - 1][0];
}

RealField Spectral::dealiased_product(std::span<const RealField> factors) {
    if (factors.size() < 2 || factors.size() > 5)
        throw std::invalid_argument("dealiased_product: need 2..5 factors");
    for (std::size_t i = 1; i < factors.size(); ++i)
        require_same_grid(factors[0], factors[i]);

    // multiplicative identities drop out exactly
    std::vector<const RealField*> live;
    for (const auto& f : factors) {
        bool all_one = true;
        for (double v : f.values())
            if (v != 1.0) { all_one = false; break; }
        if (!all_one) live.push_back(&f);
    }
    if (live.empty()) {
        std::vector<double> ones(factors[0].size(), 1.0);
        return RealField(factors[0].grid_ptr(), std::move(ones));
    }
    if (live.size() == 1) return *live[0];

    auto& sp = Spectral::get(factors[0].grid().n());
    const std::size_t m = sp.fine_n();
    std::vector<double> acc(m), tmp(m);
    auto hat = sp.forward(*live[0]);
    sp.to_fine(hat, acc);
    for (std::size_t i = 1; i < live.size(); ++i) {
        hat = sp.forward(*live[i]);
        sp.to_fine(hat, tmp);
        kern::ops().vmul(acc.data(), acc.data(), tmp.data(), m);
    }
    std::vector<cplx> out_hat(sp.nbins());
    sp.from_fine(acc, out_hat);
    return sp.inverse(factors[0].grid_ptr(), out_hat);
}

}  // namespace g5
